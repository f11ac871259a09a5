"""Soft-margin kernel SVM trained in the dual over a precomputed Gram matrix.

Labels follow the suite encoding (pass = +1, fail = -1). The decision value
for a point with kernel values ``k`` against the support vectors is::

    f = sum(alpha[r] * label[r] * k[r]) - bias

The solver is SMO-style pairwise coordinate ascent. Each step updates the
maximal violating pair: the first index has the largest KKT violation, the
second the largest error gap to it among indices that can move the other
way. Pairs with non-positive curvature (the sequence kernel is not known to
be positive semidefinite) jump to whichever end of the feasible segment
gives the better objective.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ContractViolation, ParseError, TrainingError
from .seqkernel import GramMatrix

log = logging.getLogger(__name__)

_SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class SvmConfig:
    """Box bounds and stopping rule.

    ``c_pos``/``c_neg`` default to ``c`` and ``c * n_pass / n_fail`` so that
    both classes carry the same total box capacity. The small default ``c``
    keeps mislabeled passes (CC tests) from being fitted as support vectors
    of their own.
    """

    c: float = 0.1
    c_pos: float | None = None
    c_neg: float | None = None
    kkt_tolerance: float = 1e-3
    max_passes: int | None = None  # iteration cap; None means 10 * m

    def __post_init__(self):
        for name in ("c", "c_pos", "c_neg"):
            value = getattr(self, name)
            if value is not None and not value > 0:
                raise ValueError(f"{name} must be positive, got {value}")
        if not self.kkt_tolerance > 0:
            raise ValueError("kkt_tolerance must be positive")
        if self.max_passes is not None and self.max_passes < 1:
            raise ValueError("max_passes must be at least 1")

    def bounds(self, labels: np.ndarray) -> tuple[float, float]:
        n_pos = int(np.sum(labels > 0))
        n_neg = len(labels) - n_pos
        c_pos = self.c if self.c_pos is None else self.c_pos
        if self.c_neg is not None:
            c_neg = self.c_neg
        else:
            c_neg = self.c * n_pos / n_neg if n_neg else self.c
        return c_pos, c_neg


@dataclass(frozen=True, eq=False)
class SvmModel:
    alphas: np.ndarray
    labels: np.ndarray
    bias: float
    kernel_ref: str
    c_pos: float
    c_neg: float
    iterations: int = 0
    converged: bool = True
    warnings: tuple[str, ...] = field(default_factory=tuple)

    @property
    def support_indices(self) -> np.ndarray:
        return np.flatnonzero(self.alphas > 0)

    @property
    def box(self) -> np.ndarray:
        return np.where(self.labels > 0, self.c_pos, self.c_neg)

    def to_text(self) -> str:
        lines = [
            "svm-model 1",
            f"kernel {self.kernel_ref}",
            f"size {len(self.alphas)}",
            f"bias {self.bias!r}",
            f"box {self.c_pos!r} {self.c_neg!r}",
            f"iterations {self.iterations}",
            f"converged {int(self.converged)}",
        ]
        lines += [f"warning {w}" for w in self.warnings]
        lines.append("# index label alpha")
        for idx in self.support_indices:
            lines.append(f"{idx} {int(self.labels[idx])} {float(self.alphas[idx])!r}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, labels: Sequence[int] | None = None) -> "SvmModel":
        """Rebuild a model from :meth:`to_text`. Labels of non-support points
        are not stored; pass ``labels`` to restore them (they default to +1)."""
        header: dict[str, str] = {}
        warnings = []
        rows = []
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            key, _, rest = line.partition(" ")
            if key == "warning":
                warnings.append(rest)
            elif key.isdigit():
                parts = line.split()
                if len(parts) != 3:
                    raise ParseError("support row needs '<index> <label> <alpha>'", lineno)
                rows.append((int(parts[0]), int(parts[1]), float(parts[2])))
            else:
                header[key] = rest
        try:
            if header["svm-model"] != "1":
                raise ParseError(f"unsupported model version {header['svm-model']}")
            size = int(header["size"])
            c_pos, c_neg = map(float, header["box"].split())
            alphas = np.zeros(size)
            lab = np.ones(size, dtype=int) if labels is None else np.array(labels, dtype=int)
            for idx, label, alpha in rows:
                alphas[idx] = alpha
                lab[idx] = label
            return cls(
                alphas=alphas,
                labels=lab,
                bias=float(header["bias"]),
                kernel_ref=header["kernel"],
                c_pos=c_pos,
                c_neg=c_neg,
                iterations=int(header.get("iterations", 0)),
                converged=header.get("converged", "1") == "1",
                warnings=tuple(warnings),
            )
        except KeyError as exc:
            raise ParseError(f"model record lacks field {exc.args[0]!r}") from None


def train(gram: GramMatrix, config: SvmConfig = SvmConfig()) -> SvmModel:
    K = gram.values
    y = gram.labels.astype(float)
    m = len(y)
    if not (np.any(y > 0) and np.any(y < 0)):
        raise TrainingError("training needs both passing and failing traces")
    if not np.allclose(K, K.T, rtol=0.0, atol=_SYMMETRY_TOL):
        raise ContractViolation("Gram matrix is not symmetric")

    c_pos, c_neg = config.bounds(gram.labels)
    C = np.where(y > 0, c_pos, c_neg)
    tol = config.kkt_tolerance
    cap = config.max_passes if config.max_passes is not None else 10 * m

    # minimise 0.5 a'Qa - sum(a) subject to y'a = 0, 0 <= a <= C
    Q = K * np.outer(y, y)
    alpha = np.zeros(m)
    grad = -np.ones(m)

    converged = stalled = False
    it = 0
    while True:
        score = -y * grad
        up = ((y > 0) & (alpha < C)) | ((y < 0) & (alpha > 0))
        low = ((y > 0) & (alpha > 0)) | ((y < 0) & (alpha < C))
        if not up.any() or not low.any():
            converged = True
            break
        i = int(np.argmax(np.where(up, score, -np.inf)))
        j = int(np.argmin(np.where(low, score, np.inf)))
        if score[i] - score[j] <= tol:
            converged = True
            break
        if it >= cap:
            break
        it += 1

        # move alpha_i by +y_i d and alpha_j by -y_j d; y'a stays fixed
        hi = (C[i] - alpha[i]) if y[i] > 0 else alpha[i]
        hi = min(hi, alpha[j] if y[j] > 0 else C[j] - alpha[j])
        slope = y[i] * grad[i] - y[j] * grad[j]  # negative for a violating pair
        curvature = K[i, i] + K[j, j] - 2.0 * K[i, j]
        if curvature > 0:
            d = min(-slope / curvature, hi)
        else:
            # concave or flat along the pair: compare the segment ends
            d = hi if slope * hi + 0.5 * curvature * hi * hi < 0 else 0.0
        if d <= 0:
            stalled = True
            break

        old_i, old_j = alpha[i], alpha[j]
        alpha[i] = _clip(old_i + y[i] * d, C[i])
        alpha[j] = _clip(old_j - y[j] * d, C[j])
        grad += Q[:, i] * (alpha[i] - old_i) + Q[:, j] * (alpha[j] - old_j)

    warnings = []
    if stalled:
        warnings.append(f"solver stalled after {it} iterations above KKT tolerance {tol:g}")
        log.warning(warnings[-1])
    elif not converged:
        warnings.append(f"iteration cap {cap} reached before KKT tolerance {tol:g}")
        log.warning(warnings[-1])

    bias, note = _bias(alpha, y, C, K)
    if note:
        warnings.append(note)
        log.warning(note)

    return SvmModel(
        alphas=alpha,
        labels=gram.labels.copy(),
        bias=bias,
        kernel_ref=gram.kernel,
        c_pos=c_pos,
        c_neg=c_neg,
        iterations=it,
        converged=converged,
        warnings=tuple(warnings),
    )


def _clip(value: float, upper: float) -> float:
    # snap round-off at the box faces so bound checks stay exact
    if value <= upper * 1e-12:
        return 0.0
    if value >= upper * (1 - 1e-12):
        return upper
    return value


def _bias(alpha, y, C, K) -> tuple[float, str | None]:
    g = K @ (alpha * y)
    free = (alpha > 0) & (alpha < C)
    if free.any():
        return float(np.mean(g[free] - y[free])), None
    # every point is at a bound: any b in [lo, hi] satisfies the KKT system
    at_upper = alpha >= C
    lower_side = ((y > 0) & at_upper) | ((y < 0) & ~at_upper)
    values = g - y
    lo = values[lower_side].max() if lower_side.any() else None
    hi = values[~lower_side].min() if (~lower_side).any() else None
    if lo is None:
        return float(hi), "no unbound support vectors; bias set to its upper limit"
    if hi is None:
        return float(lo), "no unbound support vectors; bias set to its lower limit"
    bias = float((lo + hi) / 2)
    if hi - lo > 1e-9:
        return bias, (
            f"no unbound support vectors; bias underdetermined in "
            f"[{lo:.6g}, {hi:.6g}], using midpoint"
        )
    return bias, None


def decision_value(model: SvmModel, similarities: Sequence[float]) -> float:
    """Pre-sign decision value given kernel values against the support vectors
    (in ``model.support_indices`` order)."""
    sv = model.support_indices
    k = np.asarray(similarities, dtype=float)
    if k.shape != sv.shape:
        raise ContractViolation(
            f"expected {len(sv)} kernel values (one per support vector), got {k.size}"
        )
    return float(np.dot(model.alphas[sv] * model.labels[sv], k) - model.bias)


def decision_values(model: SvmModel, rows: np.ndarray) -> np.ndarray:
    """Decision values for many points; ``rows`` holds kernel values against
    every training point (for example rows of the training Gram matrix)."""
    rows = np.atleast_2d(np.asarray(rows, dtype=float))
    sv = model.support_indices
    return rows[:, sv] @ (model.alphas[sv] * model.labels[sv]) - model.bias


def classify(value: float) -> int:
    """+1 (pass) iff the decision value is strictly positive."""
    return 1 if value > 0 else -1


def dual_objective(model: SvmModel, gram: GramMatrix) -> float:
    ay = model.alphas * model.labels
    return float(model.alphas.sum() - 0.5 * ay @ gram.values @ ay)


def kkt_residuals(model: SvmModel, gram: GramMatrix) -> np.ndarray:
    """Per-point violation of the soft-margin KKT conditions (0 = satisfied)."""
    y = model.labels.astype(float)
    margin = y * decision_values(model, gram.values)
    a, C = model.alphas, model.box
    return np.where(
        a <= 0,
        np.maximum(0.0, 1 - margin),
        np.where(a >= C, np.maximum(0.0, margin - 1), np.abs(margin - 1)),
    )
