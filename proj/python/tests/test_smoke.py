# Copyright 2026 The hcnot Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import numpy as np
import pytest

import hcnot


def test_version():
    assert hcnot.__version__


def test_herald_probability_is_one_quarter():
    assert hcnot.herald_probability("D", "L") == pytest.approx(0.25, abs=1e-9)


def test_bell_branches_and_feedforward():
    phi_plus = hcnot.bell_vector("Phi+")
    branches = hcnot.run_gate("D", "H")
    assert [b["herald"] for b in branches] == ["DH", "DV", "AH", "AV"]
    for b in branches:
        assert b["probability"] == pytest.approx(1 / 16)
        assert b["state"].shape == (4, 4)
        assert hcnot.fidelity(b["corrected_state"], phi_plus) == pytest.approx(1.0, abs=1e-9)


def test_truth_table():
    ideal = hcnot.truth_table()
    np.testing.assert_allclose(ideal, hcnot.ideal_truth_table(), atol=1e-9)
    noisy = hcnot.truth_table(cross_overlap=0.88, ancilla_fidelity=0.945)
    assert 0.85 < hcnot.truth_table_overlap(noisy) < 0.95


def test_hom_and_photonics():
    assert hcnot.hom_visibility(0.88) == pytest.approx(0.88)
    smf = hcnot.overlap_efficiency((5.0, 5.0), (8.0, 11.0))
    tec = hcnot.overlap_efficiency((10.0, 10.0), (8.0, 11.0))
    assert smf == pytest.approx(0.677, abs=1e-3)
    assert hcnot.improvement_ratio(tec, smf) == pytest.approx(0.434, abs=1e-3)
    assert hcnot.design_pbs(1.0, 0.5, 20.0)["leakage"] < 1e-12


def test_tomography_round_trip():
    psi = hcnot.bell_vector("Psi-")
    rho = np.outer(psi, psi.conj())
    counts = hcnot.expected_counts(rho, 1e6)
    fit = hcnot.mle_reconstruct(counts)
    assert fit["converged"]
    assert hcnot.fidelity(fit["rho"], psi) > 0.999
    with pytest.raises(hcnot.EstimatorFailure):
        hcnot.mle_reconstruct([0.0] * 36)


def test_counting():
    assert hcnot.sample_counts(0.0, 10.0, 1) == 0
    assert hcnot.sample_counts(0.1, 3600.0, 5) == hcnot.sample_counts(0.1, 3600.0, 5)
    assert hcnot.noise_subtract(5, 4, 3) == -2


def test_run_experiment_json():
    cfg = {"experiment": "coupling"}
    doc = json.loads(hcnot.run_experiment(json.dumps(cfg)))
    assert doc["results"]["eta"]["tec"] > 0.96
    assert doc["version"] == hcnot.__version__
    with pytest.raises(hcnot.ConfigError):
        hcnot.run_experiment(json.dumps({"noise": {"cross_overlap": 3}}))
