import pytest

from prodhyp import suites
from prodhyp.suites import CheckResult, Suite, SuiteError, get_suite_type, get_suite_types, run_suite


ALL_SUITES = ("identities", "cartan", "lemma1", "ode", "slice", "rotation", "n3", "theorem")


def test_registry():
    assert set(get_suite_types()) == set(ALL_SUITES)
    assert get_suite_type("cartan") is suites.Cartan
    assert get_suite_type("nope") is None

def test_registry_is_read_only():
    with pytest.raises(TypeError):
        get_suite_types()["extra"] = suites.Cartan

def test_duplicate_suite_name():
    with pytest.raises(SuiteError):
        class Again(Suite, suite_name="cartan"):
            def checks(self):
                return []

def test_unknown_suite():
    with pytest.raises(SuiteError):
        run_suite("nope")

def test_check_result():
    assert CheckResult.below("a", 1e-13, 1e-12).passed
    assert not CheckResult.below("a", 1e-11, 1e-12).passed
    assert CheckResult.flag("b", True).threshold == 0.0

@pytest.mark.parametrize("name", ALL_SUITES)
def test_suite_passes(name):
    result = run_suite(name)
    failed = [c for c in result.checks if not c.passed]
    assert result.suite == name
    assert result.checks
    assert not failed
    assert result.passed

def test_n3_lists_obstructions():
    result = run_suite("n3")
    listing = {c.name: c.residual for c in result.checks if c.name.startswith("obstruction[")}
    assert listing == {f"obstruction[n={n}]": float(n - 3) for n in range(3, 17)}

def test_suites_are_deterministic():
    first, second = run_suite("lemma1"), run_suite("lemma1")
    assert first == second
