from __future__ import annotations

import pytest

from sumcard.synthetic import employees_queries, employees_summary


@pytest.fixture
def employees():
    """Employees/cars graph with type triples and its drawn summary."""
    return employees_summary(with_types=True)


@pytest.fixture
def employee_queries(employees):
    g, s = employees
    return employees_queries(s.dictionary)
