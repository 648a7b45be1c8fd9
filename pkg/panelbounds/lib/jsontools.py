import numpy as np
import simplejson as json

from panelbounds.lib.exceptions import ArgumentError
from panelbounds.lib.utils import is_float_nan


# JSON encoding string
JSON_NULL = None


class JSONError(ArgumentError):
    """For errors while parsing JSON."""
    pass


def get_json_value(value):
    """Parse JSON value based on type."""
    if isinstance(value, np.generic):
        value = value.item()

    if is_float_nan(value):
        value = JSON_NULL
    elif isinstance(value, float) and np.isinf(value):
        value = 'inf' if value > 0 else '-inf'

    return value


def to_jsonable(obj):
    """Recursively convert numpy containers and scalars to JSON values."""
    if hasattr(obj, 'to_record'):
        obj = obj.to_record()

    if isinstance(obj, dict):
        return dict((str(key), to_jsonable(value))
                    for key, value in obj.items())
    elif isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj]
    elif isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())

    return get_json_value(obj)


def dump_record(obj):
    """Dump `obj` as key-sorted JSON with exact float representations."""
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + '\n'


def load_record(content):
    try:
        return json.loads(content)
    except ValueError as err:
        raise JSONError('cannot parse JSON record: %s' % err)


def frame_to_records(frame):
    """Convert a DataFrame to a list of row dicts encodable as JSON."""
    return [dict((str(key), to_jsonable(value)) for key, value in
                 row.items()) for row in frame.to_dict(orient='records')]
