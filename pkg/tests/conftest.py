from __future__ import annotations

import pytest


def pytest_addoption(parser):
	parser.addoption("--runslow", action="store_true", default=False, help="run exhaustive oracles marked slow")


def pytest_collection_modifyitems(config, items):
	if config.getoption("--runslow"):
		return
	skip_slow = pytest.mark.skip(reason="needs --runslow")
	for item in items:
		if "slow" in item.keywords:
			item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def _no_budget_override(monkeypatch):
	monkeypatch.delenv("STRUKT_BUDGET", raising=False)
