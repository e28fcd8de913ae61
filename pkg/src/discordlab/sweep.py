"""Parameter sweeps over the 3x3 family, sudden-change detection, audits and output files."""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .discord import (
    GAP_SLACK,
    OptimizerConfig,
    bound_report,
    certify,
    measurement_value,
    optimize_discord,
)
from .entanglement import classify
from .errors import AlphaOutOfRange, InsufficientCount, InsufficientGrid, InvalidConfig, IoError
from .states import (
    ALPHA_MAX,
    ALPHA_MIN,
    DensityMatrix,
    MeasurementBasis,
    bloch_decompose,
    horodecki_state,
    random_density,
)

CSV_COLUMNS = (
    "alpha",
    "purity",
    "lf_bound",
    "sharp_bound",
    "upper",
    "gap",
    "status",
    "negativity",
    "ccnr",
    "phase",
)
THREADS_ENV = "DISCORDLAB_THREADS"
TIGHTNESS_TOL = 1e-6
CROSSING_TOL = 1e-12


@dataclass(frozen=True)
class SweepRecord:
    alpha: float
    purity: float
    lf: float
    sharp: float
    upper: float
    gap: float
    status: str
    negativity: float
    ccnr: float
    phase: str

    def row(self) -> dict:
        """Field values keyed by the output column names."""
        d = asdict(self)
        d["lf_bound"] = d.pop("lf")
        d["sharp_bound"] = d.pop("sharp")
        return {k: d[k] for k in CSV_COLUMNS}

    @classmethod
    def from_row(cls, row: dict) -> "SweepRecord":
        def num(key):
            return float(row[key])

        return cls(
            alpha=num("alpha"),
            purity=num("purity"),
            lf=num("lf_bound"),
            sharp=num("sharp_bound"),
            upper=num("upper"),
            gap=num("gap"),
            status=str(row["status"]),
            negativity=num("negativity"),
            ccnr=num("ccnr"),
            phase=str(row["phase"]),
        )


class BoundSample(NamedTuple):
    """Bounds-only sweep point; enough input for :func:`detect_kinks`."""

    alpha: float
    lf: float
    sharp: float


@dataclass(frozen=True)
class KinkReport:
    locations: list
    method: str
    resolution: float

    def to_dict(self) -> dict:
        return {"locations": list(self.locations), "method": self.method, "resolution": self.resolution}


@dataclass
class AuditSummary:
    passed: bool
    checked: int
    counterexamples: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checked": self.checked, "counterexamples": self.counterexamples}


# -- sweeps -----------------------------------------------------------------------


def alpha_grid(alpha_min: float, alpha_max: float, steps: int) -> np.ndarray:
    if not ALPHA_MIN <= alpha_min < alpha_max <= ALPHA_MAX:
        raise AlphaOutOfRange(
            f"need {ALPHA_MIN} <= alpha_min < alpha_max <= {ALPHA_MAX}, got [{alpha_min}, {alpha_max}]"
        )
    if steps < 2:
        raise InsufficientGrid(f"steps must be >= 2, got {steps}")
    return np.linspace(alpha_min, alpha_max, steps)


def sweep_point(alpha: float, cfg: OptimizerConfig) -> SweepRecord:
    state = horodecki_state(alpha).state
    bounds = bound_report(bloch_decompose(state))
    report = certify(state, cfg)
    label = classify(state)
    return SweepRecord(
        alpha=float(alpha),
        purity=state.purity(),
        lf=bounds.lf,
        sharp=report.lower,
        upper=report.upper,
        gap=report.upper - report.lower,
        status=report.status.value,
        negativity=label.negativity,
        ccnr=label.ccnr,
        phase=label.phase.value,
    )


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        count = 0
    if count < 1:
        raise InvalidConfig(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return count


def run_sweep(alpha_min: float, alpha_max: float, steps: int, cfg: OptimizerConfig | None = None) -> list[SweepRecord]:
    """Certify and classify every point of a uniform alpha grid (endpoints included)."""
    cfg = cfg or OptimizerConfig()
    grid = alpha_grid(alpha_min, alpha_max, steps)
    workers = min(worker_count(), len(grid))
    if workers == 1:
        records = [sweep_point(a, cfg) for a in grid]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(sweep_point, grid, [cfg] * len(grid)))
    return sorted(records, key=lambda r: r.alpha)


def bound_sweep(alpha_min: float, alpha_max: float, steps: int) -> list[BoundSample]:
    """Both lower bounds on the grid, without running the optimizer."""
    out = []
    for a in alpha_grid(alpha_min, alpha_max, steps):
        rep = bound_report(bloch_decompose(horodecki_state(a).state))
        out.append(BoundSample(float(a), rep.lf, rep.sharp))
    return out


# -- sudden-change detection -----------------------------------------------------------


def _active_projector(state: DensityMatrix, tol: float = CROSSING_TOL) -> np.ndarray:
    """Projector onto the eigenvectors of the traceless block kept out of the bound.

    These are the top ``m - 1`` eigenvalues of ``M~``, widened to include any
    eigenvalue tied with the ``(m-1)``-th within ``tol``.
    """
    gram = bloch_decompose(state).gram()[1:, 1:]
    w, v = np.linalg.eigh(gram)
    w, v = w[::-1], v[:, ::-1]
    cut = w[state.m - 2]
    keep = v[:, w >= cut - tol]
    return keep @ keep.T


def _projector_distance(p: np.ndarray, q: np.ndarray) -> float:
    return float(np.linalg.norm(p - q, 2))


def _check_uniform(alphas: np.ndarray) -> float:
    if len(alphas) < 5:
        raise InsufficientGrid(f"need at least 5 records, got {len(alphas)}")
    steps = np.diff(alphas)
    h = float(steps.mean())
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)):
        raise InsufficientGrid("records must lie on a uniform increasing grid")
    return h


def _family_state(alpha: float) -> DensityMatrix:
    return horodecki_state(alpha).state


def _records_match_family(records, family) -> bool:
    idx = sorted({0, len(records) // 2, len(records) - 1})
    for i in idx:
        try:
            state = family(records[i].alpha)
        except Exception:
            return False
        if abs(bound_report(bloch_decompose(state)).sharp - records[i].sharp) > 1e-10:
            return False
    return True


def branch_crossings(
    family: Callable[[float], DensityMatrix], alphas: Sequence[float], refine_tol: float
) -> list[float]:
    """Locate changes of the eigenvalue branch that the sharp bound discards.

    A jump in the active projector between neighbouring grid points brackets
    a crossing; bisection then keeps whichever half still contains the jump.
    """
    alphas = [float(a) for a in alphas]
    projs = [_active_projector(family(a)) for a in alphas]
    found = []
    for i in range(len(alphas) - 1):
        if _projector_distance(projs[i], projs[i + 1]) < 0.5:
            continue
        lo, hi = alphas[i], alphas[i + 1]
        p_lo, p_hi = projs[i], projs[i + 1]
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            p_mid = _active_projector(family(mid))
            if _projector_distance(p_mid, p_lo) <= _projector_distance(p_mid, p_hi):
                lo, p_lo = mid, p_mid
            else:
                hi, p_hi = mid, p_mid
        found.append(0.5 * (lo + hi))
    return found


def second_difference_kinks(alphas: np.ndarray, values: np.ndarray, h: float, floor: float = 1e-6) -> list[float]:
    """Grid points where ``|D2 sharp| / h^2`` exceeds ten times its median.

    ``floor`` suppresses round-off on curvature-free data.  Adjacent flagged
    points are merged into one location.
    """
    d2 = np.abs(values[2:] - 2 * values[1:-1] + values[:-2]) / h**2
    flagged = np.nonzero((d2 > 10 * np.median(d2)) & (d2 > floor))[0] + 1
    groups: list[list[int]] = []
    for i in flagged:
        if groups and i - groups[-1][-1] <= 1:
            groups[-1].append(int(i))
        else:
            groups.append([int(i)])
    return [float(np.mean(alphas[g])) for g in groups]


def detect_kinks(records, refine_tol: float = 1e-6, family: Callable[[float], DensityMatrix] | None = _family_state) -> KinkReport:
    """Find sudden changes of the sharp bound along a sweep.

    Records need ``alpha`` and ``sharp``.  When they were produced by
    ``family`` (checked on sampled rows) the branch-crossing method is used;
    otherwise, or with ``family=None``, the second-difference fallback runs on
    the recorded values.
    """
    records = sorted(records, key=lambda r: r.alpha)
    alphas = np.array([r.alpha for r in records], dtype=float)
    h = _check_uniform(alphas)
    if family is not None and _records_match_family(records, family):
        locs = branch_crossings(family, alphas, refine_tol)
        method, resolution = "BranchCrossing", refine_tol
    else:
        values = np.array([r.sharp for r in records], dtype=float)
        locs = second_difference_kinks(alphas, values, h)
        method, resolution = "SecondDifference", h
    locs = sorted(a for a in locs if alphas[0] <= a <= alphas[-1])
    return KinkReport(locs, method, resolution)


# -- randomized audit -------------------------------------------------------------------

AUDIT_SHAPES = ((2, 2), (2, 3), (3, 3))


def audit_random(
    count: int,
    seed: int,
    shapes: Sequence[tuple[int, int]] = AUDIT_SHAPES,
    cfg: OptimizerConfig | None = None,
    lf_offset: float = 0.0,
) -> AuditSummary:
    """Check ``0 <= lf <= sharp <= optimizer <= computational`` on random states.

    Qubit-A states must also have ``sharp == optimizer`` within 1e-6.
    ``lf_offset`` is a test hook that corrupts the first bound.
    """
    if count < 1:
        raise InsufficientCount(f"count must be >= 1, got {count}")
    cfg = cfg or OptimizerConfig(restarts=8, seed=seed)
    children = np.random.SeedSequence(seed).spawn(count)
    bad = []
    for i, child in enumerate(children):
        m, n = shapes[i % len(shapes)]
        rng = np.random.default_rng(child)
        rank = int(rng.integers(1, m * n + 1))
        state_seed = int(rng.integers(0, 2**31 - 1))
        state = random_density(m, n, rank, state_seed)
        rep = bound_report(bloch_decompose(state))
        lf = rep.lf + lf_offset
        opt = optimize_discord(state, cfg).value
        comp = measurement_value(state, MeasurementBasis.computational(m))
        chain = [("0<=lf", 0.0, lf), ("lf<=sharp", lf, rep.sharp), ("sharp<=optimizer", rep.sharp, opt), ("optimizer<=computational", opt, comp)]
        failures = [name for name, a, b in chain if a > b + GAP_SLACK]
        if m == 2 and abs(rep.sharp - opt) >= TIGHTNESS_TOL:
            failures.append("qubit tightness")
        if failures:
            bad.append(
                {
                    "index": i,
                    "shape": [m, n],
                    "rank": rank,
                    "state_seed": state_seed,
                    "failed": failures,
                    "lf": lf,
                    "sharp": rep.sharp,
                    "optimizer": opt,
                    "computational": comp,
                }
            )
    return AuditSummary(not bad, count, bad)


# -- output -----------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def records_to_csv(records: Sequence[SweepRecord]) -> str:
    buf = io.StringIO()
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for rec in records:
        row = rec.row()
        buf.write(",".join(_fmt(row[c]) for c in CSV_COLUMNS) + "\n")
    return buf.getvalue()


def records_from_csv(text: str) -> list[SweepRecord]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [SweepRecord.from_row(row) for row in reader]


def records_to_json(records: Sequence[SweepRecord]) -> str:
    return json.dumps([rec.row() for rec in records], indent=1) + "\n"


def records_from_json(text: str) -> list[SweepRecord]:
    return [SweepRecord.from_row(row) for row in json.loads(text)]


def emit_output(payload, fmt: str, path) -> None:
    """Write sweep records (CSV or JSON) or a report object (JSON) to ``path``."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")
    if hasattr(payload, "to_dict"):
        if fmt != "json":
            raise ValueError("reports can only be written as JSON")
        text = json.dumps(payload.to_dict(), indent=1) + "\n"
    elif fmt == "csv":
        text = records_to_csv(payload)
    else:
        text = records_to_json(payload)
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc
