import logging
import os
from io import StringIO

import simplejson as json

from panelbounds.app import build_parser, dispatch
from panelbounds.controllers.abstract_controller import VERSION_NUMBER
from panelbounds.tests.test_base import TestBase


class TestApp(TestBase):

    def tearDown(self):
        logger = logging.getLogger('panelbounds')

        for handler in list(logger.handlers):
            logger.removeHandler(handler)

        logger.setLevel(logging.NOTSET)
        logger.propagate = True
        TestBase.tearDown(self)

    def _dispatch(self, argv):
        stdout = StringIO()
        code = dispatch(argv + ['-q'], stdout)
        content = stdout.getvalue()

        return code, json.loads(content) if content else None

    def _write_config(self, config):
        path = self.tmp_path('config.json')

        with open(path, 'w') as f:
            f.write(json.dumps(config))

        return path

    def test_parser_has_every_route(self):
        parser = build_parser()
        args = parser.parse_args(['idset', '--design', 'discrete_uniform',
                                  '--params', 'beta0=0.5'])

        self.assertEqual(args.subcommand, 'idset')
        self.assertEqual(args.action, 'identified_set')
        self.assertEqual(args.params, ['beta0=0.5'])

    def test_version(self):
        code, record = self._dispatch(['version'])

        self.assertEqual(code, 0)
        self.assertEqual(record['status'], 'success')
        self.assertEqual(record['result']['version'], VERSION_NUMBER)
        self.assertEqual(record['config']['subcommand'], 'version')

    def test_bad_flag(self):
        code, record = self._dispatch(['bounds', '--no-such-flag'])

        self.assertEqual(code, 2)
        self.assertIsNone(record)

    def test_unknown_config_key(self):
        path = self._write_config({'slack': 1e-5})
        code, record = self._dispatch(['bounds', '--config', path])

        self.assertEqual(code, 2)
        self.assertEqual(record['status'], 'error')
        self.assertEqual(record['error_type'], 'ConfigError')
        self.assertIn('slack', record['error'])

    def test_bad_panel(self):
        code, record = self._dispatch([
            'bounds', '--panel', self.fixture_path('nonbinary_panel.csv'),
            '--beta', '1.0'])

        self.assertEqual(code, 2)
        self.assertEqual(record['result']['error_type'], 'PanelFormatError')
        self.assertIn('row 7', record['result']['error'])

    def test_numerical_failure(self):
        path = self.tmp_path('flat.csv')

        with open(path, 'w') as f:
            f.write('id,t,y,x1\n')

            for i in range(1, 7):
                f.write('%d,1,0,0\n%d,2,0,1\n' % (i, i))

        code, record = self._dispatch(['bounds', '--panel', path,
                                       '--grid-points', '11'])

        self.assertEqual(code, 3)
        self.assertEqual(record['status'], 'error')
        self.assertEqual(record['result']['error_type'], 'EstimationError')

    def test_flags_override_config(self):
        path = self._write_config({
            'subcommand': 'bounds', 'schema_version': 1,
            'panel': self.fixture_path('small_panel.csv'), 'beta': [0.5],
            'grid_points': 11})
        code, record = self._dispatch(['bounds', '--config', path,
                                       '--beta', '1.0'])

        self.assertEqual(code, 0)
        self.assertEqual(record['config']['beta'], [1.0])
        self.assertEqual(record['config']['grid_points'], 11)
        self.assertEqual(record['result']['estimates'][0]['method'],
                         'known_beta')

    def test_output_file(self):
        output = self.tmp_path('out/version.json')
        stdout = StringIO()
        code = dispatch(['version', '--output', output, '-q'], stdout)

        self.assertEqual(code, 0)
        self.assertEqual(stdout.getvalue(), '')
        self.assertTrue(os.path.exists(output))

    def test_bounds_then_validate(self):
        dump = self.tmp_path('dump')
        code, record = self._dispatch([
            'bounds', '--panel', self.fixture_path('small_panel.csv'),
            '--beta', '1.0', '--grid-points', '21', '--dump', dump])

        self.assertEqual(code, 0)
        self.assertEqual(record['result']['estimates'][0][
            'distinct_programs'], 4)
        self.assertEqual(len(os.listdir(dump)), 4)

        code, record = self._dispatch([
            'validate-bounds', '--bound-function',
            os.path.join(dump, 'effect0_z0.json')])

        self.assertEqual(code, 0)
        self.assertTrue(record['result']['holds'])
        self.assertEqual(record['result']['grid_size'], 21)
