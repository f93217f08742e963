import os
import unittest
from pathlib import Path
from unittest import mock

from pydantic import ValidationError

from src.config.settings import Settings
from src.utils.helpers import content_hash, format_scalar, parse_scalar


class TestSettings(unittest.TestCase):
    def test_defaults(self):
        with mock.patch.dict(os.environ, {}, clear=True):
            config = Settings(_env_file=None)
        self.assertEqual(config.divergence_guard_exponent, 60)
        self.assertEqual(config.divergence_factor, 2.0 ** 60)
        self.assertEqual(config.output_dir, Path("runs"))
        self.assertFalse(config.parallel)

    def test_environment_overrides(self):
        env = {
            "MTM_DIVERGENCE_GUARD_EXPONENT": "10",
            "MTM_EXECUTION": "parallel",
            "MTM_MAX_WORKERS": "8",
            "MTM_OUTPUT_DIR": "/tmp/mtm-runs",
            "MTM_TRACE_FORMAT": "json",
        }
        with mock.patch.dict(os.environ, env, clear=True):
            config = Settings(_env_file=None)
        self.assertEqual(config.divergence_factor, 1024.0)
        self.assertTrue(config.parallel)
        self.assertEqual(config.output_dir, Path("/tmp/mtm-runs"))
        self.assertEqual(config.trace_format, "json")

    def test_single_worker_runs_sequentially(self):
        with mock.patch.dict(os.environ, {"MTM_EXECUTION": "parallel", "MTM_MAX_WORKERS": "1"}, clear=True):
            self.assertFalse(Settings(_env_file=None).parallel)

    def test_invalid_values(self):
        with mock.patch.dict(os.environ, {"MTM_CONFIDENCE_Z": "-1"}, clear=True):
            with self.assertRaises(ValidationError):
                Settings(_env_file=None)
        with mock.patch.dict(os.environ, {"MTM_TRACE_FORMAT": "xml"}, clear=True):
            with self.assertRaises(ValidationError):
                Settings(_env_file=None)


class TestHelpers(unittest.TestCase):
    def test_scalars(self):
        self.assertEqual(format_scalar(None), "")
        self.assertEqual(format_scalar(3), "3")
        self.assertEqual(format_scalar(0.1), "0.1")
        self.assertEqual(parse_scalar(format_scalar(1 / 3)), 1 / 3)
        self.assertIsNone(parse_scalar("  "))

    def test_content_hash(self):
        # matches `git hash-object` for an empty blob
        self.assertEqual(content_hash(""), "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391")
        self.assertNotEqual(content_hash("a"), content_hash("b"))


if __name__ == "__main__":
    unittest.main()
