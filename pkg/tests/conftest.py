import pytest

from wqkd.analyzer import derive_detection_table
from wqkd.keyrate import AnalyzerConstants


@pytest.fixture(scope="session")
def table():
    return derive_detection_table()


@pytest.fixture(scope="session")
def constants(table):
    return AnalyzerConstants.from_table(table)
