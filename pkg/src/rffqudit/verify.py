"""Named verification suites with per-check tolerances.

Each check compares two independently constructed quantities and reports a
CheckResult carrying the worst residual, the tolerance it was held to, and
the pass/fail verdict. The suites:

    coupling  — sector census, basis orthonormality, sector membership,
                coupling-choice independence (lambda-only unitary remixing)
    encoder   — matrix-unit algebra, collective-rotation invariance,
                encode/decode round trips, probability and entropy fidelity
    reference — closed-form n=3 / n=4 transcriptions against the generic
                pipeline, trine decoding, singlet covariance, the n=4 -> n=3
                partial-trace reduction
    hws       — clock/shift unitarity, periods, omega-commutation, and the
                d=2 identification with the logical Pauli pair
    all       — everything above

Every check has its own default tolerance; passing an explicit ``tol``
overrides all of them uniformly.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from . import reference as ref
from .coupling import (
    basis_overlap_blocks,
    build_coupled_basis,
    fourier_coupling,
    gram_residual,
    sector_census,
    sector_membership_residual,
)
from .encoder import (
    QOperatorSet,
    QuditState,
    build_hws,
    build_q_set,
    decode_payload,
    decode_state,
    encode_state,
    encoded_entropy_check,
    hws_commutation_residual,
)
from .errors import ConsistencyError, ValidationError
from .linalg import dagger, identity, max_abs_diff
from .spinsys import (
    SpinRegister,
    all_permutations,
    cyclic_permutation,
    haar_su2,
    kron_power,
    permutation_operator,
    total_J,
)

DEFAULT_SEED = 1234


@dataclass(frozen=True)
class CheckResult:
    id: str
    description: str
    residual: float
    tolerance: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def _check(id: str, description: str, residual: float, default_tol: float,
           tol: float | None) -> CheckResult:
    tolerance = default_tol if tol is None else tol
    return CheckResult(
        id=id,
        description=description,
        residual=float(residual),
        tolerance=float(tolerance),
        passed=bool(residual <= tolerance),
    )


def _failure(id: str, description: str, default_tol: float,
             tol: float | None) -> CheckResult:
    tolerance = default_tol if tol is None else tol
    return CheckResult(
        id=id, description=description, residual=float("inf"),
        tolerance=float(tolerance), passed=False,
    )


# ---------------------------------------------------------------------------
# Reusable residual computations
# ---------------------------------------------------------------------------

def q_algebra_residuals(qs: QOperatorSet) -> dict:
    """Worst residual of each matrix-unit property, recomputed from scratch."""
    pairs = [(l, lp) for l in range(1, qs.d + 1) for lp in range(1, qs.d + 1)]
    herm = max(max_abs_diff(dagger(qs(l, lp)), qs(lp, l)) for l, lp in pairs)
    trace = max(
        abs(np.trace(qs(l, lp)) - (qs.d if l == lp else 0.0)) for l, lp in pairs
    )
    zero = np.zeros_like(qs(1, 1))
    closure = 0.0
    for l, lp in pairs:
        for m, mp in pairs:
            expected = qs(l, mp) if lp == m else zero
            closure = max(closure, max_abs_diff(qs(l, lp) @ qs(m, mp), expected))
    js = total_J(SpinRegister(qs.n))
    commute = max(
        max_abs_diff(qs(l, lp) @ j_op, j_op @ qs(l, lp))
        for l, lp in pairs
        for j_op in (js.jx, js.jy, js.jz)
    )
    return {"hermitian-pairing": herm, "trace": trace,
            "closure": closure, "j-commutation": commute}


def rotation_invariance_residual(qs: QOperatorSet, trials: int,
                                 seed: int = DEFAULT_SEED) -> float:
    """Worst ||R Q R^dag - Q|| over random collective rotations and all Q."""
    reg = SpinRegister(qs.n)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    worst = 0.0
    ops = [qs(l, lp) for l in range(1, qs.d + 1) for lp in range(1, qs.d + 1)]
    for _ in range(trials):
        big = kron_power(reg, haar_su2(rng))
        big_dag = dagger(big)
        for q in ops:
            worst = max(worst, max_abs_diff(big @ q @ big_dag, q))
    return worst


def round_trip_residual(qs: QOperatorSet, trials: int,
                        seed: int = DEFAULT_SEED) -> float:
    """Worst encode -> decode deviation over random logical states."""
    from .channel import random_density

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    worst = 0.0
    for _ in range(trials):
        state = QuditState(d=qs.d, rho=random_density(rng, qs.d))
        decoded = decode_state(qs, encode_state(qs, state))
        worst = max(worst, max_abs_diff(state.rho, decoded.rho))
    return worst


def born_probability_residual(qs: QOperatorSet, trials: int,
                              seed: int = DEFAULT_SEED) -> float:
    """Worst |encoded probability - logical probability| over random pairs,

    with and without a random collective rotation in between."""
    from .channel import born_rule_harness

    report = born_rule_harness(qs, trials, seed)
    return max(report.max_encoded_deviation, report.max_rotated_deviation)


def entropy_defect_residual(qs: QOperatorSet, trials: int,
                            seed: int = DEFAULT_SEED) -> float:
    """Worst |S(payload) - S(logical) - log2 d| over random logical states."""
    from .channel import random_density

    rng = np.random.default_rng(np.random.SeedSequence(seed))
    worst = 0.0
    for _ in range(trials):
        state = QuditState(d=qs.d, rho=random_density(rng, qs.d))
        check = encoded_entropy_check(state, encode_state(qs, state))
        worst = max(worst, abs(check.defect))
    return worst


def cyclic_invariance_residual(n: int) -> float:
    """Worst ||C |ket><ket| C^dag - |ket><ket||| under the cyclic shift.

    With the Fourier coupling, shifting every constituent one slot multiplies
    each sector ket by a phase, so the diagonal projectors are invariant.
    """
    reg = SpinRegister(n)
    basis = build_coupled_basis(reg)
    c = permutation_operator(reg, cyclic_permutation(n))
    worst = 0.0
    for m2 in basis.m2_values():
        for lam in range(1, basis.d + 1):
            ket = basis.ket(m2, lam)
            proj = np.outer(ket, ket.conj())
            worst = max(worst, max_abs_diff(c @ proj @ dagger(c), proj))
    return worst


def coupling_independence_residual(n: int) -> float:
    """Residual of the lambda-only-mixing claim between two couplings.

    The second coupling remixes the first n-1 Fourier rows by an (n-1)-point
    Fourier matrix; the sector bases must then differ by one unitary lambda
    block repeated identically across m2.
    """
    reg = SpinRegister(n)
    base = build_coupled_basis(reg)
    mix = np.eye(n, dtype=complex)
    mix[: n - 1, : n - 1] = fourier_coupling(n - 1)
    other = build_coupled_basis(reg, mix @ fourier_coupling(n))
    blocks = basis_overlap_blocks(base, other)
    first = None
    worst = 0.0
    for block in blocks.values():
        worst = max(worst, max_abs_diff(block @ block.conj().T, identity(base.d)))
        if first is None:
            first = block
        else:
            worst = max(worst, max_abs_diff(block, first))
    return worst


def singlet_covariance_residuals() -> tuple[float, float]:
    """(worst covariant-pair residual, largest escape of the pairwise singlet).

    All 24 constituent permutations must map the symmetric-coupling singlet
    projectors onto that same pair; the successively-coupled projector
    cg_proj1 must be moved OFF its pair by at least one permutation, so the
    second number should be large (> 1e-3), not small.
    """
    layer = ref.n4_singlet_layer()
    pair = [layer["proj_lambda1"], layer["proj_lambda2"]]
    cg_pair = [layer["cg_proj1"], layer["cg_proj2"]]
    reg = SpinRegister(4)
    worst_pair = 0.0
    best_escape = 0.0
    for perm in all_permutations(4):
        w = permutation_operator(reg, perm)
        w_dag = dagger(w)
        for p in pair:
            moved = w @ p @ w_dag
            worst_pair = max(
                worst_pair, min(max_abs_diff(moved, c) for c in pair)
            )
        moved_cg = w @ cg_pair[0] @ w_dag
        best_escape = max(
            best_escape, min(max_abs_diff(moved_cg, c) for c in cg_pair)
        )
    return worst_pair, best_escape


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def suite_coupling(n_values=(3, 4, 5, 6, 7, 8), tol: float | None = None,
                   census_n_values=(2, 3, 4, 5, 6, 7, 8)) -> list[CheckResult]:
    results = []
    for n in census_n_values:
        cid = f"coupling:census:n={n}"
        desc = f"sector multiplicities for n={n} match brute-force diagonalization"
        try:
            sector_census(SpinRegister(n))
            results.append(_check(cid, desc, 0.0, 0.0, tol))
        except ConsistencyError as exc:
            results.append(_failure(cid, f"{desc}: {exc}", 0.0, tol))
    for n in n_values:
        basis = build_coupled_basis(SpinRegister(n))
        results.append(_check(
            f"coupling:gram:n={n}",
            f"sector basis for n={n} is orthonormal",
            gram_residual(basis), 1e-10, tol,
        ))
        results.append(_check(
            f"coupling:sector-membership:n={n}",
            f"sector basis for n={n} satisfies the J^2 and Jz eigenvalue equations",
            sector_membership_residual(basis), 1e-10, tol,
        ))
        results.append(_check(
            f"coupling:independence:n={n}",
            "changing the coupling only remixes the degeneracy label unitarily",
            coupling_independence_residual(n), 1e-10, tol,
        ))
        if n <= 6:
            results.append(_check(
                f"coupling:cyclic-invariance:n={n}",
                "Fourier-coupled sector projectors survive the cyclic shift",
                cyclic_invariance_residual(n), 1e-10, tol,
            ))
    return results


def suite_encoder(n_values=(3, 4, 5, 6), rotation_trials=20,
                  seed: int = DEFAULT_SEED,
                  tol: float | None = None) -> list[CheckResult]:
    results = []
    for n in n_values:
        qs = build_q_set(build_coupled_basis(SpinRegister(n)))
        algebra = q_algebra_residuals(qs)
        results.append(_check(
            f"encoder:q-hermitian:n={n}",
            f"Q(l,l')^dag = Q(l',l) for n={n}", algebra["hermitian-pairing"],
            1e-12, tol,
        ))
        results.append(_check(
            f"encoder:q-trace:n={n}",
            f"Tr Q(l,l') = d delta for n={n}", algebra["trace"], 1e-10, tol,
        ))
        results.append(_check(
            f"encoder:q-closure:n={n}",
            f"Q(l,l')Q(m,m') = delta Q(l,m') for n={n}", algebra["closure"],
            1e-10, tol,
        ))
        results.append(_check(
            f"encoder:q-commute-J:n={n}",
            f"[Q, J] = 0 for n={n}", algebra["j-commutation"], 1e-10, tol,
        ))
        results.append(_check(
            f"encoder:rotation-invariance:n={n}",
            f"Q operators survive {rotation_trials} random collective rotations",
            rotation_invariance_residual(qs, rotation_trials, seed), 1e-9, tol,
        ))
        results.append(_check(
            f"encoder:round-trip:n={n}",
            "encode -> decode returns the logical state",
            round_trip_residual(qs, 5, seed), 1e-10, tol,
        ))
        results.append(_check(
            f"encoder:born:n={n}",
            "encoded probabilities match logical ones, rotated or not",
            born_probability_residual(qs, 5, seed), 1e-10, tol,
        ))
        results.append(_check(
            f"encoder:entropy:n={n}",
            "encoded entropy exceeds logical entropy by exactly log2(d) bits",
            entropy_defect_residual(qs, 5, seed), 1e-8, tol,
        ))
    return results


def suite_reference(tol: float | None = None) -> list[CheckResult]:
    results = []

    # Internal self-consistency of each closed-form family.
    for case_id, case in ref.REFERENCE_CASES.items():
        cid = f"reference:case:{case_id}"
        try:
            case.build()
            results.append(_check(cid, case.description, 0.0, 0.0, tol))
        except ConsistencyError as exc:
            results.append(_failure(cid, f"{case.description}: {exc}", 0.0, tol))

    # Cross-checks against the generic pipeline. Any ConsistencyError raised
    # by a corrupted closed form is converted into a named failure, never an
    # abort, so one bad constant cannot hide the rest of the report.
    try:
        results.extend(_reference_cross_checks(tol))
    except ConsistencyError as exc:
        results.append(_failure(
            "reference:cross-check",
            f"closed forms against the generic pipeline: {exc}", 0.0, tol,
        ))
    return results


def _reference_cross_checks(tol: float | None) -> list[CheckResult]:
    results = []

    qs3 = build_q_set(build_coupled_basis(SpinRegister(3)))
    q3 = ref.n3_q_operators()
    worst = max(
        max_abs_diff(q3[f"q{l}{lp}"], qs3(l, lp))
        for l in (1, 2) for lp in (1, 2)
    )
    results.append(_check(
        "reference:n3-q-vs-pipeline",
        "n=3 closed-form matrix units equal the coupled-basis ones",
        worst, 1e-12, tol,
    ))

    pauli = ref.n3_pauli()
    results.append(_check(
        "reference:n3-pauli-vs-pipeline",
        "n=3 closed-form Paulis equal the coupled-basis combinations",
        max(
            max_abs_diff(pauli["x"], qs3(1, 2) + qs3(2, 1)),
            max_abs_diff(pauli["y"], -1j * qs3(1, 2) + 1j * qs3(2, 1)),
            max_abs_diff(pauli["z"], qs3(1, 1) - qs3(2, 2)),
            max_abs_diff(pauli["i_sector"], qs3.sector_projector),
        ),
        1e-12, tol,
    ))

    trine = ref.n3_trine()
    decoded = decode_payload(qs3, trine["rho3"] / 2)
    results.append(_check(
        "reference:trine-decode",
        "pipeline decoding of the third trine payload matches the closed form",
        max_abs_diff(decoded.rho, trine["logical3"]),
        1e-12, tol,
    ))

    qs4 = build_q_set(build_coupled_basis(SpinRegister(4)))
    q4 = ref.n4_q_operators()
    worst = max(
        max_abs_diff(q4[f"q{l}{lp}"], qs4(l, lp))
        for l in (1, 2, 3) for lp in (1, 2, 3)
    )
    results.append(_check(
        "reference:n4-q-vs-pipeline",
        "n=4 closed-form matrix units equal the coupled-basis ones",
        worst, 1e-10, tol,
    ))

    hws4 = build_hws(qs4)
    forms = ref.n4_hws()
    results.append(_check(
        "reference:n4-hws-vs-pipeline",
        "n=4 closed-form clock/shift pair equals the matrix-unit one",
        max(
            max_abs_diff(forms["u3"], hws4.u),
            max_abs_diff(forms["v3"], hws4.v),
        ),
        1e-10, tol,
    ))

    from .coupling import cg_singlets, symmetric_singlets

    reg4 = SpinRegister(4)
    layer = ref.n4_singlet_layer()
    sym = symmetric_singlets(reg4)
    cg = cg_singlets(reg4)
    results.append(_check(
        "reference:n4-singlet-states",
        "singlet projectors equal the outer products of the explicit states",
        max(
            max_abs_diff(layer["proj_lambda1"], np.outer(sym[0], sym[0].conj())),
            max_abs_diff(layer["proj_lambda2"], np.outer(sym[1], sym[1].conj())),
            max_abs_diff(layer["cg_proj1"], np.outer(cg[0], cg[0].conj())),
            max_abs_diff(layer["cg_proj2"], np.outer(cg[1], cg[1].conj())),
        ),
        1e-10, tol,
    ))

    worst_pair, best_escape = singlet_covariance_residuals()
    results.append(_check(
        "reference:singlet-covariance",
        "all 24 permutations map the symmetric singlet pair onto itself",
        worst_pair, 1e-10, tol,
    ))
    results.append(_check(
        "reference:singlet-contrast",
        "some permutation moves the pairwise singlet off its pair "
        f"(escape distance {best_escape:.6f}, needs > 1e-3)",
        max(0.0, 1e-3 - best_escape), 0.0, tol,
    ))

    report = ref.n4_to_n3_reduction()
    reduction_residual = report.max_residual
    if not report.holds or report.constant is None:
        reduction_residual = float("inf")
    else:
        reduction_residual = max(reduction_residual, abs(report.constant - 0.5))
    results.append(_check(
        "reference:reduction",
        "tracing any constituent from the n=4 singlet Paulis gives 1/2 times "
        "the relabeled n=3 Paulis",
        reduction_residual, 1e-10, tol,
    ))
    return results


def suite_hws(n_values=(3, 4, 5, 6), tol: float | None = None) -> list[CheckResult]:
    results = []
    for n in n_values:
        d = n - 1
        cid = f"hws:relations:d={d}"
        desc = (f"clock/shift pair for d={d}: periods and omega-commutation")
        try:
            qs = build_q_set(build_coupled_basis(SpinRegister(n)))
            pair = build_hws(qs)
        except ConsistencyError as exc:
            results.append(_failure(cid, f"{desc}: {exc}", 1e-10, tol))
            continue
        sector = qs.sector_projector
        ud = np.linalg.matrix_power(pair.u, d)
        vd = np.linalg.matrix_power(pair.v, d)
        residual = max(
            max_abs_diff(ud, sector),
            max_abs_diff(vd, sector),
            hws_commutation_residual(pair),
        )
        results.append(_check(cid, desc, residual, 1e-10, tol))
        if d == 2:
            pauli = ref.n3_pauli()
            results.append(_check(
                "hws:d2-pauli-identification",
                "for d=2 the clock is -pauli_z and the shift is pauli_x",
                max(
                    max_abs_diff(pair.u, -pauli["z"]),
                    max_abs_diff(pair.v, pauli["x"]),
                ),
                1e-12, tol,
            ))
    return results


def _n_kwargs(n_values) -> dict:
    if n_values is None:
        return {}
    return {"n_values": tuple(n for n in n_values if n >= 3)}


def _coupling_kwargs(n_values) -> dict:
    if n_values is None:
        return {}
    return {
        "n_values": tuple(n for n in n_values if n >= 3),
        "census_n_values": tuple(n for n in n_values if n >= 2),
    }


def suite_all(tol: float | None = None, seed: int = DEFAULT_SEED,
              n_values=None) -> list[CheckResult]:
    return (
        suite_coupling(tol=tol, **_coupling_kwargs(n_values))
        + suite_encoder(seed=seed, tol=tol, **_n_kwargs(n_values))
        + suite_reference(tol=tol)
        + suite_hws(tol=tol, **_n_kwargs(n_values))
    )


SUITES = ("all", "coupling", "encoder", "reference", "hws")


def run_suite(name: str, tol: float | None = None, seed: int = DEFAULT_SEED,
              n_values=None) -> list[CheckResult]:
    """Run one named suite, optionally restricted to the given register sizes.

    The reference suite is n-independent and ignores n_values.
    """
    if name not in SUITES:
        raise ValidationError(
            f"unknown suite {name!r}; expected one of {sorted(SUITES)}"
        )
    if name == "all":
        return suite_all(tol=tol, seed=seed, n_values=n_values)
    if name == "coupling":
        return suite_coupling(tol=tol, **_coupling_kwargs(n_values))
    if name == "encoder":
        return suite_encoder(seed=seed, tol=tol, **_n_kwargs(n_values))
    if name == "hws":
        return suite_hws(tol=tol, **_n_kwargs(n_values))
    return suite_reference(tol=tol)
