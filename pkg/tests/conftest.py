"""Shared fixtures."""

import pytest

from stmod.config.settings import clear_settings_overrides


@pytest.fixture(autouse=True)
def _reset_settings_overrides():
    clear_settings_overrides()
    yield
    clear_settings_overrides()
