"""Decision-level classifier fusion.

Combines the class-probability outputs of several trained classifiers
into one decision. Three methods:

- naive_bayes: prior-weighted product of member posteriors under a
  conditional-independence assumption, computed in the log domain with
  a small floor so no single member can veto a class outright.
- hard_vote: majority over member argmax labels.
- soft_vote: (weighted) arithmetic mean of the probability vectors.

Ties always break toward the lowest class index. The named presets
DCF-LA / DCF-LR / DCF-AR / DCF-LAR are soft votes over the
{lenet, alexnet, resnet34} rosters.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import AllZeroWeights, EmptyMembers, LengthMismatch, MissingMember

METHODS = ("naive_bayes", "hard_vote", "soft_vote")

# preset name -> member classifier ids (soft vote)
DCF_PRESETS = {
    "DCF-LA": ("lenet", "alexnet"),
    "DCF-LR": ("lenet", "resnet34"),
    "DCF-AR": ("alexnet", "resnet34"),
    "DCF-LAR": ("lenet", "alexnet", "resnet34"),
}


def validate_probs(p, name: str = "probabilities") -> np.ndarray:
    arr = np.asarray(p, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise LengthMismatch(f"{name} must be a non-empty 1-D vector")
    if (arr < 0).any() or not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite and nonnegative")
    total = arr.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"{name} must sum to 1 (got {total})")
    return arr


@dataclass(frozen=True)
class FusionConfig:
    method: str = "soft_vote"
    members: tuple = ()
    weights: tuple | None = None
    prior: tuple | None = None  # None -> uniform
    floor: float = 1e-7

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown fusion method {self.method!r}")
        if len(self.members) < 1:
            raise EmptyMembers("at least one member required")
        if self.weights is not None:
            w = np.asarray(self.weights, dtype=np.float64)
            if w.size != len(self.members):
                raise LengthMismatch("one weight per member required")
            if (w < 0).any():
                raise ValueError("weights must be nonnegative")
            if w.sum() <= 0:
                raise AllZeroWeights("weights must have positive sum")
        if self.floor <= 0:
            raise ValueError("floor must be positive")

    @classmethod
    def preset(cls, name: str, method: str = "soft_vote") -> "FusionConfig":
        if name not in DCF_PRESETS:
            raise KeyError(f"unknown preset {name!r}; choose from {sorted(DCF_PRESETS)}")
        return cls(method=method, members=DCF_PRESETS[name])

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "members": list(self.members),
            "weights": None if self.weights is None else list(self.weights),
            "prior": None if self.prior is None else list(self.prior),
            "floor": self.floor,
        }


def nb_combine(prior, members, floor: float = 1e-7) -> np.ndarray:
    """Floored product of member posteriors times the prior, renormalized.

    score(c) = prior(c) * prod_n max(member_n(c), floor), evaluated in
    the log domain; the returned vector is the normalized score.
    """
    if not members:
        raise EmptyMembers("nb_combine needs at least one member")
    member_arrs = [validate_probs(m, f"member {i}") for i, m in enumerate(members)]
    length = member_arrs[0].size
    for i, m in enumerate(member_arrs):
        if m.size != length:
            raise LengthMismatch(f"member {i} has length {m.size}, expected {length}")
    if prior is None:
        prior_arr = np.full(length, 1.0 / length)
    else:
        prior_arr = validate_probs(prior, "prior")
        if prior_arr.size != length:
            raise LengthMismatch(f"prior has length {prior_arr.size}, expected {length}")

    # the floor applies to member factors only; a zero prior stays a hard zero
    with np.errstate(divide="ignore"):
        log_prior = np.log(prior_arr)
    log_members = np.stack([np.log(np.maximum(m, floor)) for m in member_arrs])
    # fsum is correctly rounded, so member order cannot shift the result
    log_score = log_prior + np.array(
        [math.fsum(log_members[:, c]) for c in range(length)]
    )
    log_score -= log_score.max()
    score = np.exp(log_score)
    return score / score.sum()


def hard_vote(labels, num_classes: int) -> int:
    """Most frequent label; ties break toward the lowest class index."""
    if len(labels) == 0:
        raise EmptyMembers("hard_vote needs at least one label")
    labels = np.asarray(labels, dtype=np.int64)
    if (labels < 0).any() or (labels >= num_classes).any():
        raise ValueError(f"labels must lie in [0, {num_classes})")
    counts = np.bincount(labels, minlength=num_classes)
    return int(np.argmax(counts))


def soft_vote(members, weights=None) -> np.ndarray:
    """Weighted arithmetic mean of member distributions.

    Accumulation uses correctly-rounded sums, so member order cannot
    change the result and full weight on one member returns that member
    unchanged; the mean is renormalized when it drifts off the simplex.
    """
    if not members:
        raise EmptyMembers("soft_vote needs at least one member")
    member_arrs = [validate_probs(m, f"member {i}") for i, m in enumerate(members)]
    length = member_arrs[0].size
    for i, m in enumerate(member_arrs):
        if m.size != length:
            raise LengthMismatch(f"member {i} has length {m.size}, expected {length}")
    if weights is None:
        w = np.full(len(member_arrs), 1.0 / len(member_arrs))
    else:
        w = np.asarray(weights, dtype=np.float64)
        if w.size != len(member_arrs):
            raise LengthMismatch("one weight per member required")
        if (w < 0).any():
            raise ValueError("weights must be nonnegative")
        total = math.fsum(w)
        if total <= 0:
            raise AllZeroWeights("weights must have positive sum")
        w = w / total
    stacked = np.stack(member_arrs)
    fused = np.array(
        [math.fsum(w[i] * stacked[i, c] for i in range(len(member_arrs))) for c in range(length)]
    )
    # renormalize only on real drift: a no-op division would still perturb
    # the last bit and break the exact weight-concentration identity
    total = fused.sum()
    if abs(total - 1.0) > 1e-12:
        fused = fused / total
    return fused


def ensemble_predict(cfg: FusionConfig, member_outputs: dict):
    """Fuse the configured members; returns (label, fused distribution)."""
    missing = [m for m in cfg.members if m not in member_outputs]
    if missing:
        raise MissingMember(f"missing member outputs: {missing}")
    ordered = [member_outputs[m] for m in cfg.members]

    if cfg.method == "naive_bayes":
        fused = nb_combine(cfg.prior, ordered, cfg.floor)
    elif cfg.method == "soft_vote":
        fused = soft_vote(ordered, cfg.weights)
    else:  # hard_vote
        arrs = [validate_probs(m, f"member {i}") for i, m in enumerate(ordered)]
        num_classes = arrs[0].size
        label = hard_vote([int(np.argmax(a)) for a in arrs], num_classes)
        fused = np.zeros(num_classes)
        fused[label] = 1.0
        return label, fused

    return int(np.argmax(fused)), fused
