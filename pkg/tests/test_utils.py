"""Tests for the environment helpers and the exception hierarchy."""

import pytest

from qubitsep.exceptions import (
    CheckpointError,
    ConfigurationError,
    DomainError,
    NumericalFailure,
    QubitSepError,
    SingularWeightError,
)
from qubitsep.utils.env import get_env_choice, get_env_variable
from qubitsep.utils.logging import format_ns


def test_get_env_variable(monkeypatch):
    """Set variables are returned and missing ones fall back to the default."""
    monkeypatch.setenv("QUBITSEP_TEST_VAR", "value")
    assert get_env_variable("QUBITSEP_TEST_VAR") == "value"
    monkeypatch.delenv("QUBITSEP_TEST_VAR")
    assert get_env_variable("QUBITSEP_TEST_VAR", "fallback") == "fallback"


def test_missing_env_variable_raises(monkeypatch):
    """A missing variable without a default is an environment error."""
    monkeypatch.delenv("QUBITSEP_TEST_VAR", raising=False)
    with pytest.raises(EnvironmentError):
        get_env_variable("QUBITSEP_TEST_VAR")


def test_get_env_choice(monkeypatch):
    """Values are upper-cased and checked against the allowed choices."""
    monkeypatch.setenv("QUBITSEP_TEST_LEVEL", " debug ")
    assert get_env_choice("QUBITSEP_TEST_LEVEL", ("DEBUG", "INFO"), "INFO") == "DEBUG"
    monkeypatch.setenv("QUBITSEP_TEST_LEVEL", "loud")
    with pytest.raises(ValueError):
        get_env_choice("QUBITSEP_TEST_LEVEL", ("DEBUG", "INFO"), "INFO")
    monkeypatch.delenv("QUBITSEP_TEST_LEVEL")
    assert get_env_choice("QUBITSEP_TEST_LEVEL", ("DEBUG", "INFO"), "INFO") == "INFO"


def test_exceptions_keep_builtin_bases():
    """Callers catching built-in types still see qubitsep errors."""
    assert issubclass(ConfigurationError, ValueError)
    assert issubclass(DomainError, ValueError)
    assert issubclass(NumericalFailure, ArithmeticError)
    assert issubclass(CheckpointError, OSError)
    assert all(issubclass(cls, QubitSepError) for cls in (ConfigurationError, DomainError, NumericalFailure, CheckpointError))


def test_singular_weight_details():
    """The failing stream index appears in the diagnostic fields."""
    error = SingularWeightError("singular", index=7)
    assert isinstance(error, NumericalFailure)
    assert error.details() == {"index": 7}
    assert ConfigurationError("bad").details() == {}


def test_format_ns():
    """Nanosecond timestamps keep the fractional second."""
    assert format_ns(1_500_000_000) == "1970-01-01T00:00:01.500000000Z"
