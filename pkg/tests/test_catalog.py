import pytest

from cdga.catalog import (Expected, UnknownFixture, fixture, fixture_names,
                          run_checks)


@pytest.mark.parametrize("name", fixture_names())
def test_every_registered_fixture_passes_its_checks(name):
    fx = fixture(name)
    results = run_checks(fx)
    assert results, "fixture carries no checks"
    failures = [r for r in results if not r.ok]
    assert not failures, \
        "; ".join(f"{r.name}: {r.detail}" for r in failures)


def test_fixture_names_resolve_and_are_stable():
    names = fixture_names()
    assert len(names) == len(set(names))
    for name in names:
        assert fixture(name).name == name


def test_family_parameters_are_open_ended():
    assert fixture("sphere:7").presentation.generators[0].degree == 7
    assert fixture("cpn:5").expected["cup_length"].value == 5
    assert fixture("heisenberg-like:5").expected["witness_degree"].value == 14


def test_unknown_fixture_raises():
    for name in ("nope", "sphere:x", "sphere:1", "cpn:0",
                 "heisenberg-like:4", "twistor:hpn:0"):
        with pytest.raises(UnknownFixture):
            fixture(name)


def test_expected_values_carry_provenance():
    for name in fixture_names():
        for key, exp in fixture(name).expected.items():
            assert isinstance(exp, Expected)
            assert exp.provenance in ("paper", "derived", "trivial"), (name, key)


def test_descriptions_are_informative():
    for name in fixture_names():
        assert len(fixture(name).description) > 10
