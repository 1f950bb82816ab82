"""Smoke tests for the python module: closed forms and the JSON runner."""

import json
import math

import pytest

import kerlab


def test_disc_green_closed_form():
    d = kerlab.Domain.disc(0j, 1.0)
    assert d.green(0.5 + 0j, 0j) == pytest.approx(math.log(0.5), abs=1e-14)
    assert d.green(0.6 + 0j, 0.3 + 0j) == pytest.approx(math.log(0.3 / 0.82), abs=1e-14)
    assert d.green_normal(1.0 + 0j, 0.5 + 0j) == pytest.approx(3.0, abs=1e-10)


def test_annulus_harmonic_measure_and_flux():
    a = kerlab.Domain.annulus(0j, 0.5, 1.0)
    z0 = math.sqrt(0.5) + 0j
    assert a.harmonic_measure_inner(z0) == pytest.approx(0.5, abs=1e-13)
    flux = kerlab.harmonic_flux(a, green_terms=[(1.0, z0)], component=1)
    assert flux == pytest.approx(math.pi, abs=1e-8)
    assert kerlab.harmonic_flux(a, log_coeff=1.0, component=1) == pytest.approx(-2 * math.pi, abs=1e-9)


def test_kernel_closed_forms():
    d = kerlab.Domain.disc(0j, 1.0)
    assert kerlab.bergman_kernel(d, 0j, 0j) == pytest.approx(1 / math.pi, abs=1e-10)
    assert kerlab.szego_kernel(d, 0j, 0j) == pytest.approx(1.0, abs=1e-12)
    z, w = 0.3 + 0.2j, -0.1 + 0.4j
    expected = 1.0 / (math.pi * (1 - z * w.conjugate()) ** 2)
    assert kerlab.bergman_kernel(d, z, w) == pytest.approx(expected, abs=1e-8)


def test_annulus_strictness():
    a = kerlab.Domain.annulus(0j, 0.5, 1.0)
    z0 = math.sqrt(0.5) + 0j
    khat = kerlab.conjugate_hardy(a, z0, degree=32, nodes=512)
    pib = math.pi * kerlab.bergman_kernel(a, z0, z0, degree=32).real
    assert khat > pib  # strict on the non-simply-connected domain
    assert khat / pib - 1 == pytest.approx(5.2389e-6, rel=0.05)


def test_run_json_theorem():
    code, report, err = kerlab.run(
        {"command": "theorem", "id": "thm1.3", "domain": {"kind": "disc", "radius": 1.0}}
    )
    assert code == 0, err
    assert report[0]["verdict"] == "equality"
    assert report[0]["ratio"] == pytest.approx(1.0, abs=1e-8)


def test_run_json_rejects_unknown_keys():
    code, report, err = kerlab.run({"command": "theorem", "bogus": 1})
    assert code == 2
    assert "bogus" in err


def test_run_json_reproducible():
    cfg = json.dumps({"command": "verify", "identity": "3:E8", "seed": 7, "samples": 2, "basis": 3})
    a = kerlab.run_json(cfg)
    b = kerlab.run_json(cfg)
    assert a == b
