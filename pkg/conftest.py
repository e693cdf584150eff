import os
import sys

import django
import pytest
from django.conf import settings

# Ensure the project directory is in the Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

if not settings.configured:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "mlouvain.settings")

django.setup()


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="Also run the benchmark-scale tests marked slow",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="benchmark-scale test, use --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
