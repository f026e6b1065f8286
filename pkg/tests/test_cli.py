"""
Tests for indgap.cli.
"""
import csv
import io
import json
import logging
import os
import pytest
import tempfile
import unittest
from contextlib import redirect_stdout
from pathlib import Path
from unittest.mock import patch

from indgap.cli import (
    EXIT_CAP,
    EXIT_DISCONNECTED,
    EXIT_FAILED,
    EXIT_INPUT,
    EXIT_INVALID,
    EXIT_OK,
    RunConfig,
    main,
)
from indgap.errors import ConfigError, MajorantDomainError


class CliTestCase(unittest.TestCase):
    """Base class running the CLI inside a scratch working directory."""

    def setUp(self):
        """Set up test data."""
        self.tmp = tempfile.TemporaryDirectory()
        self.cwd = os.getcwd()
        os.chdir(self.tmp.name)

    def tearDown(self):
        package_logger = logging.getLogger('indgap')
        for handler in list(package_logger.handlers):
            handler.close()
            package_logger.removeHandler(handler)
        os.chdir(self.cwd)
        self.tmp.cleanup()

    def run_cli(self, *argv):
        buffer = io.StringIO()
        with redirect_stdout(buffer):
            code = main(list(argv))
        return code, buffer.getvalue()

    def write(self, name, text):
        Path(name).write_text(text)
        return name


class PolyCommandTestCase(CliTestCase):
    """Test cases for `indgap poly`."""

    @pytest.mark.timeout(30)
    def test_star(self):
        """Test kind: unit_tests - poly star:3"""
        code, out = self.run_cli('poly', 'star:3')
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data['coeffs'], [1, -4, 3, -1])
        self.assertEqual(data['n'], 4)

    @pytest.mark.timeout(30)
    def test_path_flag_and_text(self):
        """Test kind: unit_tests - poly --graph path:4 --format text"""
        code, out = self.run_cli('poly', '--graph', 'path:4', '--format', 'text')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("coefficients: [1, -4, 3]", out)

    @pytest.mark.timeout(30)
    def test_empty_edge_list(self):
        """Test kind: unit_tests - poly on a file with no vertices"""
        code, out = self.run_cli('poly', '--file', self.write('empty.txt', "0 0\n"))
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(json.loads(out)['coeffs'], [1])

    @pytest.mark.timeout(30)
    def test_out_file(self):
        """Test kind: unit_tests - poly --out writes the file and logs it"""
        code, out = self.run_cli('poly', 'cycle:5', '--out', 'poly.json')
        self.assertEqual(code, EXIT_OK)
        self.assertEqual(out, "")
        self.assertEqual(json.loads(Path('poly.json').read_text())['coeffs'], [1, -5, 5])
        self.assertIn("Wrote poly output to poly.json", Path('indgap.log').read_text())

    @pytest.mark.timeout(30)
    def test_input_errors(self):
        """Test kind: unit_tests - exit codes for unreadable input"""
        self.assertEqual(self.run_cli('poly', 'blob:3')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('poly', 'path:x')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('poly', '--file', 'missing.txt')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('poly', '--file', self.write('bad.txt', "3 1\n0 0\n"))[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('poly', 'path:3', '--graph', 'path:4')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('poly')[0], EXIT_INPUT)

    @pytest.mark.timeout(30)
    @patch('indgap.cli.logger')
    def test_vertex_cap(self, mock_logger):
        """Test kind: unit_tests - more than 64 vertices exits with the cap code"""
        code, _ = self.run_cli('poly', 'star:64')
        self.assertEqual(code, EXIT_CAP)
        self.assertTrue(mock_logger.error.call_args[0][0].startswith("Vertex cap exceeded"))


class CertifyCommandTestCase(CliTestCase):
    """Test cases for `indgap certify`."""

    @pytest.mark.timeout(60)
    def test_complete_graph(self):
        """Test kind: unit_tests - certify complete:2"""
        code, out = self.run_cli('certify', 'complete:2', '--grid', '32')
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertTrue(data['valid'])
        self.assertEqual(data['certified_gap'], "1/65536")

    @pytest.mark.timeout(60)
    def test_text_output(self):
        """Test kind: unit_tests - certify --format text lists both constants"""
        code, out = self.run_cli('certify', 'path:3', '--grid', '32', '--tol', '1e-15', '--format', 'text')
        self.assertEqual(code, EXIT_OK)
        self.assertIn("(constant 1/8)", out)
        self.assertIn("(constant 1/4)", out)
        self.assertIn("valid: True", out)

    @pytest.mark.timeout(30)
    def test_disconnected_and_tiny(self):
        """Test kind: unit_tests - certify refuses disconnected and one-vertex graphs"""
        path = self.write('two.txt', "4 2\n0 1\n2 3\n")
        self.assertEqual(self.run_cli('certify', '--file', path)[0], EXIT_DISCONNECTED)
        self.assertEqual(self.run_cli('certify', 'path:1')[0], EXIT_DISCONNECTED)

    @pytest.mark.timeout(60)
    def test_invalid_certificate(self):
        """Test kind: unit_tests - an invalid certificate is still printed and exits 5"""
        with patch('indgap.certifier.majorant_grid', side_effect=MajorantDomainError("G >= 1")):
            code, out = self.run_cli('certify', 'path:3', '--grid', '32')
        self.assertEqual(code, EXIT_INVALID)
        self.assertFalse(json.loads(out)['valid'])

    @pytest.mark.timeout(30)
    def test_bad_configuration(self):
        """Test kind: unit_tests - invalid flags exit with the input code"""
        self.assertEqual(self.run_cli('certify', 'path:3', '--grid', '8')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('certify', 'path:3', '--tol', '0')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('certify', 'path:3', '--tol', 'tiny')[0], EXIT_INPUT)
        self.assertEqual(self.run_cli('certify', 'path:3', '--precision', '32')[0], EXIT_INPUT)


class OtherCommandsTestCase(CliTestCase):
    """Test cases for plot-data, roots, families and verify."""

    @pytest.mark.timeout(60)
    def test_plot_data(self):
        """Test kind: unit_tests - plot-data on S_3 with a leaf pivot"""
        code, out = self.run_cli('plot-data', 'star:3', '--pivot', '1', '--grid', '32', '--precision', '128')
        self.assertEqual(code, EXIT_OK)
        rows = list(csv.reader(io.StringIO(out)))
        self.assertEqual(rows[0], ['theta', 'abs_f_u', 'majorant'])
        self.assertEqual(len(rows), 33)
        values = [[float(x) for x in row] for row in rows[1:]]
        self.assertEqual(values[0][0], 0.0)
        self.assertAlmostEqual(values[0][1], 1.0, places=9)
        self.assertAlmostEqual(values[0][2], 1.0, places=9)
        for theta, actual, majorant in values:
            self.assertLessEqual(actual, majorant + 1e-12)
        majorants = [row[2] for row in values]
        self.assertTrue(all(a >= b - 1e-12 for a, b in zip(majorants, majorants[1:])))

    @pytest.mark.timeout(30)
    def test_plot_data_bad_pivot(self):
        """Test kind: unit_tests - plot-data rejects a pivot outside the graph"""
        self.assertEqual(self.run_cli('plot-data', 'star:3', '--pivot', '9', '--grid', '32')[0], EXIT_INPUT)

    @pytest.mark.timeout(30)
    def test_roots(self):
        """Test kind: unit_tests - roots path:3"""
        code, out = self.run_cli('roots', 'path:3', '--precision', '128')
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertEqual(data['graph'], 'path:3')
        self.assertEqual(len(data['roots']), 2)
        self.assertTrue(data['roots'][0]['re'].startswith('0.381966'))

    @pytest.mark.timeout(30)
    def test_families(self):
        """Test kind: unit_tests - families --kind cycle"""
        code, out = self.run_cli('families', '--kind', 'cycle', '--nmax', '6', '--precision', '64')
        self.assertEqual(code, EXIT_OK)
        rows = list(csv.DictReader(io.StringIO(out)))
        self.assertEqual([row['n'] for row in rows], ['3', '4', '5', '6'])
        self.assertTrue(rows[1]['beta'].startswith('0.29289'))

    @pytest.mark.timeout(120)
    def test_verify_combinatorics(self):
        """Test kind: unit_tests - verify combinatorics passes"""
        code, out = self.run_cli('verify', 'combinatorics')
        self.assertEqual(code, EXIT_OK)
        data = json.loads(out)
        self.assertTrue(data['success'])
        self.assertEqual(data['failures'], [])

    @pytest.mark.timeout(60)
    def test_verify_text(self):
        """Test kind: unit_tests - verify positivity --format text"""
        code, out = self.run_cli('verify', 'positivity', '--nmax', '4', '--format', 'text')
        self.assertEqual(code, EXIT_OK)
        self.assertTrue(out.startswith("positivity: PASS"))

    @pytest.mark.timeout(30)
    @patch('indgap.cli.logger')
    def test_unexpected_error(self, mock_logger):
        """Test kind: unit_tests - unexpected exceptions exit 1 and are logged"""
        with patch('indgap.cli.independence_poly', side_effect=RuntimeError("boom")):
            code, _ = self.run_cli('poly', 'path:3')
        self.assertEqual(code, EXIT_FAILED)
        self.assertEqual(mock_logger.error.call_args[0][0], "Unexpected error: boom")


class RunConfigTestCase(unittest.TestCase):
    """Test cases for RunConfig validation."""

    @pytest.mark.timeout(30)
    def test_defaults(self):
        """Test kind: unit_tests - RunConfig defaults are valid"""
        cfg = RunConfig('poly', graph='path:3')
        self.assertEqual(cfg.fmt, 'json')
        self.assertEqual(cfg.load().n, 3)

    @pytest.mark.timeout(30)
    def test_violations(self):
        """Test kind: unit_tests - RunConfig rejects out-of-range values"""
        for kwargs in [{'tol': '-1'}, {'grid': 15}, {'precision': 52}, {'order': -1}, {'jobs': 0}]:
            with self.subTest(**kwargs):
                with self.assertRaises(ConfigError):
                    RunConfig('certify', graph='path:3', **kwargs)

    @pytest.mark.timeout(30)
    def test_format_per_command(self):
        """Test kind: unit_tests - RunConfig picks the command's default format and rejects the others"""
        self.assertEqual(RunConfig('plot-data', graph='path:3').fmt, 'csv')
        self.assertEqual(RunConfig('families').fmt, 'csv')
        for command, fmt in [('poly', 'csv'), ('certify', 'csv'), ('roots', 'csv'), ('roots', 'text'), ('plot-data', 'json')]:
            with self.subTest(command=command, fmt=fmt):
                with self.assertRaises(ConfigError):
                    RunConfig(command, graph='path:3', fmt=fmt)

    @pytest.mark.timeout(30)
    @patch('indgap.settings.CONFIG_ERRORS', ["INDGAP_GRID must be an integer, got 'wide'"])
    def test_settings_errors(self):
        """Test kind: unit_tests - RunConfig reports malformed settings"""
        with self.assertRaises(ConfigError) as ctx:
            RunConfig('poly', graph='path:3')
        self.assertIn("INDGAP_GRID", str(ctx.exception))


class FormatAndSettingsExitCodeTestCase(CliTestCase):
    """Test cases for configuration problems reaching the exit-code table."""

    @pytest.mark.timeout(30)
    def test_csv_rejected(self):
        """Test kind: unit_tests - --format csv on poly, certify and roots exits with the input code"""
        for command in ['poly', 'certify', 'roots']:
            with self.subTest(command=command):
                code, out = self.run_cli(command, 'path:3', '--format', 'csv')
                self.assertEqual(code, EXIT_INPUT)
                self.assertEqual(out, '')

    @pytest.mark.timeout(30)
    @patch('indgap.settings.CONFIG_ERRORS', ["INDGAP_PRECISION must be an integer, got 'lots'"])
    def test_malformed_setting(self):
        """Test kind: unit_tests - a malformed INDGAP_* value exits with the input code"""
        with patch('indgap.cli.logger') as mock_logger:
            code, _ = self.run_cli('poly', 'path:3')
        self.assertEqual(code, EXIT_INPUT)
        self.assertIn("INDGAP_PRECISION", mock_logger.error.call_args[0][0])
