"""Randomised verification battery for the equivalence of

    conformally Osserman  <=>  self-dual or anti-self-dual  <=>  quaternionic Weyl tensor

on seeded instance families.  Each family records its violations and the
largest residual seen; a run is clean only if every family is.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import curvature, duality, osserman, quaternion
from .errors import BadParameters, CurvatureError
from .lintensor import random_orthogonal

KERNEL_TOL = 1e-10
STRICT_SIDE_TOL = 1e-9
PATTERN_EIG_TOL = 1e-9
ROUND_TRIP_TOL = 1e-8
SAMPLED_N = 200

FAMILIES = ("weyl_kernel", "synthesized", "pattern", "round_trip", "generic")


@dataclass
class FamilyResult:
    name: str
    count: int = 0
    violations: list = field(default_factory=list)
    max_residual: float = 0.0

    def fail(self, index: int, reason: str) -> None:
        self.violations.append({"instance": index, "reason": reason})

    def residual(self, value: float) -> None:
        self.max_residual = max(self.max_residual, float(value))

    def as_dict(self) -> dict:
        return {
            "count": self.count,
            "violations": len(self.violations),
            "max_residual": self.max_residual,
            "first_violations": self.violations[:5],
        }


@dataclass
class BatteryResult:
    seed: int
    count: int
    families: dict[str, FamilyResult]
    decider_disagreements: int = 0

    @property
    def ok(self) -> bool:
        return self.decider_disagreements == 0 and not any(f.violations for f in self.families.values())

    def as_dict(self) -> dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "families": {name: fam.as_dict() for name, fam in self.families.items()},
            "decider_disagreements": self.decider_disagreements,
            "ok": self.ok,
        }


def _rng(seed: int, family: str, index: int) -> np.random.Generator:
    return np.random.default_rng([seed, FAMILIES.index(family), index])


def random_lambdas(rng: np.random.Generator) -> np.ndarray:
    lam = rng.uniform(-2.0, 2.0, 3)
    return lam - lam.mean()


def _conformal_decisions(T):
    sampled = osserman.osserman_sampled(T, use_weyl=True, n=SAMPLED_N)
    exact = osserman.osserman_exact(T, use_weyl=True)
    return sampled, exact


def run_battery(seed: int = 1, count: int = 50, *, flipped_phi2: bool = False) -> BatteryResult:
    """Run every family ``count`` times.

    ``flipped_phi2`` builds quaternion structures from the uncorrected Phi2
    table; the battery is expected to flag that configuration.
    """
    if count < 1:
        raise BadParameters(f"count must be at least 1, got {count}")
    fams = {name: FamilyResult(name) for name in FAMILIES}
    disagreements = 0

    def decide(T, fam: FamilyResult, i: int, expect: bool) -> None:
        nonlocal disagreements
        sampled, exact = _conformal_decisions(T)
        if sampled.osserman != exact.osserman:
            disagreements += 1
            fam.fail(i, "sampled and exact conformal Osserman deciders disagree")
        if sampled.osserman != expect or exact.osserman != expect:
            fam.fail(i, f"conformally Osserman decision {sampled.osserman}/{exact.osserman}, expected {expect}")

    fam = fams["weyl_kernel"]
    for i in range(count):
        rng = _rng(seed, "weyl_kernel", i)
        h = rng.standard_normal((4, 4))
        T = rng.uniform(-3, 3) * curvature.r0() + curvature.kulkarni(h + h.T)
        rel = curvature.norm(curvature.weyl(T)) / (1.0 + curvature.norm(T))
        fam.count += 1
        fam.residual(rel)
        if rel > KERNEL_TOL:
            fam.fail(i, f"Weyl part of a conformally flat tensor has relative size {rel:.3e}")

    fam = fams["synthesized"]
    for i in range(count):
        rng = _rng(seed, "synthesized", i)
        fam.count += 1
        try:
            Q = quaternion.standard_structure(flipped_phi2=flipped_phi2).conjugate(random_orthogonal(rng, 1))
            bad = Q.violations()
            if bad:
                fam.fail(i, f"quaternion structure identities broken: {sorted(bad)}")
            W = quaternion.synthesize(Q, random_lambdas(rng))
        except CurvatureError as exc:
            fam.fail(i, f"{type(exc).__name__}: {exc}")
            continue
        rep = duality.classify(W)
        side = rep.norm_minus / max(rep.norm_plus + rep.norm_minus, 1e-300)
        fam.residual(side)
        if rep.cls != duality.SELF_DUAL or side > STRICT_SIDE_TOL:
            fam.fail(i, f"classified {rep.cls} with |W-|/N = {side:.3e}")
        decide(W, fam, i, True)

    fam = fams["pattern"]
    for i in range(count):
        rng = _rng(seed, "pattern", i)
        abc = random_lambdas(rng) * 3.0
        O = random_orthogonal(rng, 1 if i % 2 == 0 else -1)
        W = curvature.transform(osserman.adapted_pattern(*abc), O)
        fam.count += 1
        rep = duality.classify(W)
        if rep.cls not in (duality.SELF_DUAL, duality.ANTI_SELF_DUAL):
            fam.fail(i, f"classified {rep.cls}")
            continue
        eigs = rep.plus_eigenvalues if rep.cls == duality.SELF_DUAL else rep.minus_eigenvalues
        err = float(np.max(np.abs(np.sort(eigs) - np.sort(-2.0 * abc))))
        fam.residual(err)
        if err > PATTERN_EIG_TOL:
            fam.fail(i, f"half-block eigenvalues off {{-2a,-2b,-2c}} by {err:.3e}")
        decide(W, fam, i, True)

    fam = fams["round_trip"]
    for i in range(count):
        rng = _rng(seed, "round_trip", i)
        lam = random_lambdas(rng)
        fam.count += 1
        try:
            Q = quaternion.standard_structure(flipped_phi2=flipped_phi2).conjugate(random_orthogonal(rng, 1 if i % 2 == 0 else -1))
            W = quaternion.synthesize(Q, lam)
            dec = quaternion.recover(W, flipped_phi2=flipped_phi2)
        except CurvatureError as exc:
            fam.fail(i, f"{type(exc).__name__}: {exc}")
            continue
        lam_err = float(np.max(np.abs(np.sort(dec.lambdas) - np.sort(lam))))
        scale = 1.0 + curvature.norm(W)
        fam.residual(max(lam_err, dec.residual / scale))
        if lam_err > ROUND_TRIP_TOL:
            fam.fail(i, f"lambda multiset changed by {lam_err:.3e}")
        if dec.residual > ROUND_TRIP_TOL * scale:
            fam.fail(i, f"reconstruction residual {dec.residual:.3e}")
        decide(W, fam, i, True)

    fam = fams["generic"]
    for i in range(count):
        T = curvature.random_act([seed, FAMILIES.index("generic"), i])
        fam.count += 1
        rep = duality.classify(T)
        if rep.cls != duality.NEITHER:
            fam.fail(i, f"generic tensor classified {rep.cls}")
        decide(T, fam, i, False)

    return BatteryResult(seed=seed, count=count, families=fams, decider_disagreements=disagreements)
