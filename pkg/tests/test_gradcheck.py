import pytest

from dehazer.exceptions import ConfigurationError, GradcheckFailure
from dehazer.gradcheck import (
    GROUPS,
    GradcheckResult,
    GradcheckSummary,
    check_case,
    run_gradcheck_suite,
    suite_cases,
)


@pytest.mark.parametrize("case", suite_cases(), ids=lambda case: case.name)
def test_case_passes(case):
    result = check_case(case)

    assert result.max_error < case.tolerance, f"{case.name}: {result.max_error:.3e}"


def test_suite_covers_every_group():
    cases = suite_cases()
    names = {case.name for case in cases}

    assert {case.group for case in cases} == set(GROUPS)
    assert len(names) == len(cases)
    assert {"spp block", "csp block", "spatial attention", "channel attention"} <= names
    assert "generator EDN-GTM" in names
    assert "discriminator EDN-GTM" in names
    assert "discriminator S-U-Net" not in names


def test_every_case_samples_twenty_coordinates_per_tensor():
    assert {case.samples for case in suite_cases()} == {20}


def test_group_selection():
    assert {case.group for case in suite_cases(["blocks"])} == {"blocks"}
    with pytest.raises(ConfigurationError):
        suite_cases(["layers", "losses"])


def test_run_suite_summary():
    summary = run_gradcheck_suite(["blocks"])

    assert len(summary.results) == 4
    assert summary.passed == 4
    summary.raise_for_failures()


def test_raise_for_failures():
    summary = GradcheckSummary(
        results=[
            GradcheckResult(name="conv2d", group="layers", max_error=1e-8, tolerance=1e-6),
            GradcheckResult(name="csp block", group="blocks", max_error=0.2, tolerance=1e-3),
        ]
    )

    assert summary.passed == 1
    assert [result.name for result in summary.failures] == ["csp block"]
    with pytest.raises(GradcheckFailure) as e:
        summary.raise_for_failures()
    assert "csp block" in str(e.value)
    assert e.value.exit_code == 3
