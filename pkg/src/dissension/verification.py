"""Property suites driven by ``dissension verify``."""

from dataclasses import dataclass
from math import pi

import numpy as np

from .correlation import conditional_entropy_two, dissension_drc, entropy_panel, verify_lemma1
from .measurement import one_particle_basis, two_particle_basis
from .merging import merging_report, unmeasured_costs, verify_corollary
from .states import random_density, random_pure_state, to_density

SUITES = ("lemma1", "lemma2", "corollary", "bases")
LEMMA2_THETAS = 50


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    detail: str

    def line(self):
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _g(x):
    return "%.3e" % x


def suite_bases(samples, seed0):
    """Projector invariants on a ``samples``-point angle grid (the seed is unused)."""
    thetas = 2.0 * pi * np.arange(max(samples, 1)) / max(samples, 1)
    worst = {"completeness": 0.0, "orthogonality": 0.0, "rank-1": 0.0, "pi-periodicity": 0.0}
    for t in thetas:
        for make in (one_particle_basis, two_particle_basis):
            projs = make(t).projectors
            d = projs[0].shape[0]
            worst["completeness"] = max(worst["completeness"], np.abs(sum(projs) - np.eye(d)).max())
            for i, pi_ in enumerate(projs):
                worst["rank-1"] = max(worst["rank-1"], abs(np.trace(pi_) - 1.0))
                for j, pj in enumerate(projs):
                    target = pi_ if i == j else 0.0
                    worst["orthogonality"] = max(worst["orthogonality"], np.abs(pi_ @ pj - target).max())
            shifted = make(t + pi).projectors
            for a, b in zip(projs, shifted):
                worst["pi-periodicity"] = max(worst["pi-periodicity"], np.abs(a - b).max())
    return [
        PropertyResult(f"bases.{k}", v < 1e-12, f"{len(thetas)} angles, max error {_g(v)}")
        for k, v in worst.items()
    ]


def suite_lemma1(samples, seed0):
    worst_gap = 0.0
    worst_s = 0.0
    worst_c2 = 0.0
    fails = 0
    for i in range(samples):
        psi = random_pure_state(3, seed0 + i)
        rho = to_density(psi)
        chk = verify_lemma1(psi)
        worst_gap = max(worst_gap, abs(chk.lhs - chk.rhs))
        worst_s = max(worst_s, entropy_panel(rho).s_abc)
        thetas = 2.0 * pi * np.arange(20) / 20
        worst_c2 = max(worst_c2, max(conditional_entropy_two(rho, t) for t in thetas))
        fails += not chk.ok
    return [
        PropertyResult("lemma1.reduction", worst_gap < 1e-8 and fails == 0,
                       f"{samples} pure states, max |lhs - rhs| {_g(worst_gap)}"),
        PropertyResult("lemma1.global_entropy", worst_s < 1e-9, f"max S(ABC) {_g(worst_s)}"),
        PropertyResult("lemma1.measured_c_entropy", worst_c2 < 1e-9,
                       f"max S(C|Pi_AB) over 20 angles {_g(worst_c2)}"),
    ]


def suite_lemma2(samples, seed0):
    thetas = 2.0 * pi * np.arange(LEMMA2_THETAS) / LEMMA2_THETAS
    worst = 0.0
    min_d2 = np.inf
    for i in range(samples):
        rho = random_density(3, 8, seed0 + i)
        panel, costs = entropy_panel(rho), unmeasured_costs(rho)
        for t in thetas:
            # the two sides of verify_lemma2, kept apart so delta2 is reused
            drc = dissension_drc(rho, t, panel=panel)
            rep = merging_report(rho, t, costs)
            worst = max(worst, abs(drc - rep.delta_total))
            min_d2 = min(min_d2, rep.delta2)
    return [
        PropertyResult("lemma2.identity", worst < 1e-9,
                       f"{samples} states x {LEMMA2_THETAS} angles, max |D_RC - Delta| {_g(worst)}"),
        PropertyResult("lemma2.delta2_nonnegative", min_d2 >= -1e-9, f"min delta2 {_g(min_d2)}"),
    ]


def suite_corollary(samples, seed0):
    worst = np.inf
    fails = 0
    for i in range(samples):
        rho = random_density(3, 8, seed0 + i)
        chk = verify_corollary(rho)
        worst = min(worst, min(chk.delta_at_thetas) - chk.delta_rc)
        fails += not chk.ok
    return [
        PropertyResult("corollary.bound", fails == 0,
                       f"{samples} states x 100 angles, min (Delta - delta_RC) {_g(worst)}"),
    ]


_RUNNERS = {
    "lemma1": suite_lemma1,
    "lemma2": suite_lemma2,
    "corollary": suite_corollary,
    "bases": suite_bases,
}


def run_suite(name, samples, seed0):
    names = SUITES if name == "all" else (name,)
    results = []
    for n in names:
        results.extend(_RUNNERS[n](samples, seed0))
    return results
