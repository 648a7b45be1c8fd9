from io import StringIO
import logging

from panelbounds.lib import log
from panelbounds.tests.test_base import TestBase


class TestLog(TestBase):

    def tearDown(self):
        logger = logging.getLogger('panelbounds')

        for handler in list(logger.handlers):
            logger.removeHandler(handler)

        logger.propagate = True
        logger.setLevel(logging.NOTSET)
        TestBase.tearDown(self)

    def test_levels(self):
        for verbosity, level in [(-1, logging.ERROR), (0, logging.WARNING),
                                 (1, logging.INFO), (2, logging.DEBUG),
                                 (5, logging.DEBUG)]:
            self.assertEqual(log.configure(verbosity).level, level)

    def test_single_handler(self):
        stream = StringIO()
        log.configure(1)
        logger = log.configure(1, stream)
        logging.getLogger('panelbounds.core.bounds').info('built %d', 3)

        self.assertEqual(len(logger.handlers), 1)
        self.assertIn('INFO panelbounds.core.bounds: built 3',
                      stream.getvalue())
