#!/usr/bin/env python3
"""
Smoke test of the ambient components: configuration, directories, run
ledger, logging and the small utilities
"""

import json
import os
import tempfile
from fractions import Fraction

from loguru import logger


def test_basic_components(tmp_path):
    """Test basic system components"""
    print("🧪 Testing Basic System Components...")
    base = str(tmp_path)
    config_path = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")

    # Test 1: Configuration loading
    from src.main import DEFAULT_CONFIG, load_config
    config = load_config(config_path)
    assert set(DEFAULT_CONFIG) <= set(config)
    with open(config_path, 'r') as f:
        assert json.load(f)["certify"]["max_prime"] == config["certify"]["max_prime"]
    print("✅ Configuration loading: PASSED")

    # Test 2: Directory creation
    from src.utils import create_directories
    create_directories(os.path.join(base, 'logs'), os.path.join(base, 'database'), "")
    assert os.path.isdir(os.path.join(base, 'logs'))
    print("✅ Directory creation: PASSED")

    # Test 3: Run ledger
    from src.database import Database
    db = Database(os.path.join(base, 'database', 'test.db'))
    assert db.record_run('field', 42, '0.1.0', 0, {"degree": 8})
    assert db.get_run_stats()['total_runs'] >= 1
    db.close()
    print("✅ Database connection: PASSED")

    # Test 4: Logging system
    from src.logger import setup_logger
    log = setup_logger(os.path.join(base, 'logs'), 'INFO')
    log.info("Test log message")
    assert os.path.exists(os.path.join(base, 'logs', 'events.log'))
    print("✅ Logging system: PASSED")

    # Test 5: Utility functions
    from src.utils import format_rational, format_time_duration, parse_poly_text, parse_rational
    assert parse_rational("-7/11") == Fraction(-7, 11)
    assert format_rational(Fraction(4, 2)) == 2
    assert parse_poly_text("[1, \"-1/2\", 3]") == [1, Fraction(-1, 2), 3]
    assert parse_poly_text("1, 0,\n-2") == [1, 0, -2]
    assert format_time_duration(75) == "1m 15s"
    print(f"✅ Utility functions: PASSED (duration: {format_time_duration(3725)})")

    print("\n🎉 All basic tests passed!")


def test_bad_rationals_rejected():
    import pytest
    from src.utils import parse_rational
    for bad in ("", "1/0", "a", "1/2/3", True, 1.5):
        with pytest.raises(ValueError):
            parse_rational(bad)


def main():
    """Main test function"""
    print("🚀 Hecke Orbit Toolkit - System Test")
    print("=" * 50)

    try:
        test_basic_components(tempfile.mkdtemp())
        basic_ok = True
    except Exception as e:
        logger.error(f"Basic components failed: {e}")
        basic_ok = False

    print("\n" + "=" * 50)
    print("📋 Test Results Summary:")
    print(f"Basic Components: {'✅ PASSED' if basic_ok else '❌ FAILED'}")

    if basic_ok:
        print("\n📝 Next steps:")
        print("1. Verify the worked example: python -m src.main paper-verify")
        print("2. Analyze the bundled dataset: python -m src.main orbits analyze")
        print("3. Run the full test suite: pytest -m 'not slow'")
    else:
        print("\n⚠️  Some tests failed. Please check the errors above.")


if __name__ == '__main__':
    main()
