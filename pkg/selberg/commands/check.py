"""check: run the built-in invariant suite and print a pass/fail table."""

import argparse
import itertools
import logging
import math
from fractions import Fraction
from typing import Callable, List, Tuple

import numpy as np
from scipy import integrate

from selberg.commands.base import Command
from selberg.data.models import LengthSpectrumEntry, ManifoldData, SmallTimeExpansion
from selberg.utils.helpers import HolomorphyError, SelbergError
from selberg.utils.plancherel import build_plancherel
from selberg.utils.rep_theory import (
    Dimension,
    KWeight,
    MWeight,
    dim_weyl_k,
    dim_weyl_m,
    restrictions,
    rotation_multiplicities,
    weyl_flip,
)
from selberg.utils.series import TruncatedSeries, gauss_log_moment
from selberg.utils.stationary_phase import expand_log_integral
from selberg.utils.trace_formula import (
    exact_h3_amplitude,
    h3_scalar_kernel,
    hyperbolic_term,
    parabolic_Tprime_expansion,
)
from selberg.utils.zeta_torsion import zeta_values

logger = logging.getLogger(__name__)

CheckResult = Tuple[bool, str]


def _k_weights(dim: Dimension, top: int):
    for entries in itertools.product(range(top + 1), repeat=dim.n):
        if list(entries) == sorted(entries, reverse=True):
            yield KWeight(entries)


def check_branching() -> CheckResult:
    for d, top in ((3, 10), (5, 4), (7, 2)):
        dim = Dimension.from_d(d)
        for nu in _k_weights(dim, top):
            total = sum(dim_weyl_m(sigma, dim) for sigma in restrictions(nu, dim))
            if total != dim_weyl_k(nu, dim):
                return False, f"d={d} nu={nu}: restrictions give {total}"
            if sum(rotation_multiplicities(nu, dim).values()) != total:
                return False, f"d={d} nu={nu}: rotation weights do not add up"
    return True, "sum [nu:sigma] dim sigma = dim nu"


def check_plancherel() -> CheckResult:
    for d in (3, 5, 7):
        dim = Dimension.from_d(d)
        for entries in itertools.product(range(-2, 3), repeat=dim.n):
            try:
                sigma = MWeight(entries)
            except SelbergError:
                continue
            poly = build_plancherel(sigma, dim, Fraction(1))
            if poly.base_coeffs != build_plancherel(weyl_flip(sigma), dim, Fraction(1)).base_coeffs:
                return False, f"d={d} sigma={sigma}: P differs from the flipped weight"
            if poly.degree != 2 * dim.n:
                return False, f"d={d} sigma={sigma}: degree {poly.degree}"
    return True, "P_sigma even of degree 2n and Weyl-flip invariant"


def check_log_moments() -> CheckResult:
    worst = 0.0
    for a in (0, 2, 4, 6):
        def integrand(y: float, a: int = a) -> float:
            return math.exp(-y * y) * y ** a * math.log(y)

        near, _ = integrate.quad(integrand, 0.0, 1.0)
        far, _ = integrate.quad(integrand, 1.0, np.inf)
        worst = max(worst, abs(2.0 * (near + far) - gauss_log_moment((a,))))
    return worst < 1e-8, f"max deviation {worst:.2e}"


def check_stationary_phase() -> CheckResult:
    f = TruncatedSeries(2, 2, {(2, 0): Fraction(1), (0, 2): Fraction(1)})
    g = TruncatedSeries.constant(2, 2, 1)
    entry = expand_log_integral(f, g, 0).entries[0]
    ok = math.isclose(entry.a, -math.pi / 2) and math.isclose(entry.b, -math.pi * np.euler_gamma / 2)
    return ok, f"a0={entry.a:.12g} b0={entry.b:.12g}"


def check_c1_vanishes() -> CheckResult:
    expansion = parabolic_Tprime_expansion(exact_h3_amplitude(12, 2), 4, exact=True)
    c1 = expansion.coefficient(0, True)
    return c1 == 0, f"t^0 log t coefficient {c1}"


def check_h3_kernel() -> CheckResult:
    worst = 0.0
    for r in np.linspace(0.0, 1.0, 20):
        for t in np.linspace(1e-3, 1e-1, 20):
            scaled = (4 * math.pi * t) ** 1.5 * math.exp(r * r / (4 * t)) * h3_scalar_kernel(r, t)
            exact = (r / math.sinh(r) if r else 1.0) * math.exp(-t)
            worst = max(worst, abs(scaled - exact))
    t = 0.1
    mass, _ = integrate.quad(
        lambda r: h3_scalar_kernel(r, t) * 4 * math.pi * math.sinh(r) ** 2, 0.0, 20.0, limit=200
    )
    ok = worst < 1e-12 and abs(mass - 1.0) < 1e-8
    return ok, f"identity {worst:.1e}, mass {mass:.12f}"


def check_hyperbolic_decay() -> CheckResult:
    dim = Dimension(1)
    manifold = ManifoldData(dim, 1.0, spectrum=(LengthSpectrumEntry(1.0, 1.0, (0.0,)),))
    sigmas = [MWeight((0,))]
    scaled = [
        hyperbolic_term(2.0 ** -k, manifold, sigmas) * math.exp(2.0 ** k / 8.0) for k in range(2, 11)
    ]
    return max(abs(v) for v in scaled) < 10.0, f"max scaled value {max(scaled):.3e}"


def check_zeta_circle() -> CheckResult:
    j = np.arange(1, 2001, dtype=float)

    def trace(t: float) -> float:
        return float(2.0 * np.exp(-t * j * j).sum())

    model = SmallTimeExpansion.single(Fraction(-1, 2), math.sqrt(math.pi)) + SmallTimeExpansion.single(0, -1.0)
    result = zeta_values(trace, model)
    ok = abs(result.zeta0 + 1.0) < 1e-8 and abs(result.det - 4 * math.pi ** 2) < 1e-6
    return ok, f"zeta(0)={result.zeta0:.10f} det={result.det:.10f}"


def check_holomorphy_guard() -> CheckResult:
    model = SmallTimeExpansion.single(0, 1e-6, has_log=True)
    try:
        zeta_values(lambda t: 0.0, model)
    except HolomorphyError:
        return True, "t^0 log t term rejected"
    return False, "t^0 log t term accepted"


CHECKS: List[Tuple[str, Callable[[], CheckResult]]] = [
    ("branching", check_branching),
    ("plancherel", check_plancherel),
    ("log-moments", check_log_moments),
    ("stationary-phase", check_stationary_phase),
    ("c1-vanishes", check_c1_vanishes),
    ("h3-kernel", check_h3_kernel),
    ("hyperbolic-decay", check_hyperbolic_decay),
    ("zeta-circle", check_zeta_circle),
    ("holomorphy-guard", check_holomorphy_guard),
]


class CheckCommand(Command):
    name = "check"
    help = "run the invariant suite and print a pass/fail table"

    def execute(self, args: argparse.Namespace) -> int:
        lines = [f"{'check':<18} {'status':<6} detail"]
        failures = 0
        for name, func in CHECKS:
            try:
                ok, detail = func()
            except SelbergError as e:
                ok, detail = False, str(e)
            failures += not ok
            status = "PASS" if ok else "FAIL"
            logger.debug(f"{name}: {status} ({detail})")
            lines.append(f"{name:<18} {status:<6} {detail}")
        lines.append(f"{len(CHECKS) - failures}/{len(CHECKS)} passed")
        self.emit("\n".join(lines), args)
        return 0 if failures == 0 else 1


def setup(cli) -> None:
    """Register the command with the CLI."""
    cli.add_command(CheckCommand(cli))
