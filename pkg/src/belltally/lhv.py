"""Deterministic local models with no-registration outcomes, and their
Monte Carlo statistics.

A microstate is a hidden variable (lam, u_a, u_b): a point lam on the unit
sphere plus one auxiliary uniform coordinate per side.  A model is local by
construction: each side's response depends only on its own direction and
the hidden variable.  Responses factor into a possessed value in {-1, +1}
(the value the side would register) and a detection indicator; the
registered outcome is the possessed value when detected, else 0.

Reproducibility scheme
----------------------
Trials are processed in fixed chunks of 65536.  Chunk ``i`` draws from
``numpy.random.default_rng(SeedSequence(seed, spawn_key=(i,)))`` and every
chunk evaluates all settings on its own sample, so tallies are pure
per-chunk functions of (seed, chunk index).  Merging is integer addition in
chunk order, which makes results bit-identical for any worker count.

The reference detection-loophole model (``gisin_gisin_model``) registers
A = sign(a.lam) with probability |a.lam| and always registers
B = -sign(b.lam).  Its registered-trials statistics reproduce the singlet
correlation -a.b while only half of the A-side trials register.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Callable, NamedTuple, Sequence

import numpy as np

from .chsh import ChshSetting
from .errors import InputValidationError, ZeroProbabilityError
from .quantum import ALGEBRA_TOL, Direction

CHUNK_SIZE = 1 << 16

# Per-correlation pair names for a CHSH run, in tally order.
PAIR_NAMES = ("ab", "ab_prime", "a_prime_b", "a_prime_b_prime")

# respond = possess * detect, evaluated on batches:
#   possess(axes (n,3), direction (3,)) -> (n,) values in {-1, +1}
#   detect(axes (n,3), u (n,), direction (3,)) -> (n,) booleans
PossessFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
DetectFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
SamplerFn = Callable[[np.random.Generator, int], tuple[np.ndarray, np.ndarray, np.ndarray]]

_OUTCOME_VALUES = np.array([-1.0, 0.0, 1.0])
_PRODUCTS = np.outer(_OUTCOME_VALUES, _OUTCOME_VALUES)


@dataclass(frozen=True)
class HiddenVariable:
    """One microstate: sphere point plus auxiliary uniforms for detection."""

    axis: Direction
    u_a: float
    u_b: float

    def __post_init__(self) -> None:
        for name, value in (("u_a", self.u_a), ("u_b", self.u_b)):
            if not 0.0 <= value < 1.0:
                raise InputValidationError(f"{name} must lie in [0, 1), got {value!r}")


def sample_hidden_uniform(
    rng: np.random.Generator, count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """lam uniform on the sphere (area-preserving map), u_a and u_b uniform.

    Draw order is fixed (z, azimuth, u_a, u_b per trial) so samples are a
    pure function of the generator state.
    """
    draws = rng.random((count, 4))
    z = 2.0 * draws[:, 0] - 1.0
    azimuth = 2.0 * math.pi * draws[:, 1]
    radial = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    axes = np.stack([radial * np.cos(azimuth), radial * np.sin(azimuth), z], axis=1)
    return axes, draws[:, 2], draws[:, 3]


@dataclass(frozen=True)
class MicrostateModel:
    """Deterministic local responses split into possession and detection."""

    name: str
    possess_a: PossessFn
    possess_b: PossessFn
    detect_a: DetectFn
    detect_b: DetectFn
    sampler: SamplerFn = sample_hidden_uniform

    def respond_a(self, hidden: HiddenVariable, direction: Direction) -> int:
        """Registered A outcome in {-1, 0, +1} for one microstate."""
        axes = hidden.axis.as_array()[None, :]
        value = int(self.possess_a(axes, direction.as_array())[0])
        detected = bool(self.detect_a(axes, np.array([hidden.u_a]), direction.as_array())[0])
        return value if detected else 0

    def respond_b(self, hidden: HiddenVariable, direction: Direction) -> int:
        """Registered B outcome in {-1, 0, +1} for one microstate."""
        axes = hidden.axis.as_array()[None, :]
        value = int(self.possess_b(axes, direction.as_array())[0])
        detected = bool(self.detect_b(axes, np.array([hidden.u_b]), direction.as_array())[0])
        return value if detected else 0


def _sign_along(axes: np.ndarray, direction: np.ndarray) -> np.ndarray:
    # sign with the zero set mapped to +1; the set has measure zero.
    return np.where(axes @ direction >= 0.0, 1, -1)


def _negative_sign_along(axes: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return np.where(axes @ direction >= 0.0, -1, 1)


def _constant_plus(axes: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return np.ones(len(axes), dtype=np.int64)


def _always_detect(axes: np.ndarray, u: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return np.ones(len(u), dtype=bool)


def _detect_if_aligned(axes: np.ndarray, u: np.ndarray, direction: np.ndarray) -> np.ndarray:
    return u < np.abs(axes @ direction)


def _rotated_sign(axes: np.ndarray, direction: np.ndarray, rotation: np.ndarray) -> np.ndarray:
    return np.where(axes @ (rotation @ direction) >= 0.0, 1, -1)


def _threshold_detect(
    axes: np.ndarray,
    u: np.ndarray,
    direction: np.ndarray,
    rotation: np.ndarray,
    base: float,
    slope: float,
) -> np.ndarray:
    alignment = np.abs(axes @ (rotation @ direction))
    return u < np.clip(base + slope * alignment, 0.0, 1.0)


def gisin_gisin_model() -> MicrostateModel:
    """Reference detection-loophole model: A registers sign(a.lam) with
    probability |a.lam|, B always registers -sign(b.lam)."""
    return MicrostateModel(
        name="gisin-gisin",
        possess_a=_sign_along,
        possess_b=_negative_sign_along,
        detect_a=_detect_if_aligned,
        detect_b=_always_detect,
    )


def sign_model() -> MicrostateModel:
    """Always-detecting anticorrelated sign responses."""
    return MicrostateModel(
        name="sign",
        possess_a=_sign_along,
        possess_b=_negative_sign_along,
        detect_a=_always_detect,
        detect_b=_always_detect,
    )


def constant_model() -> MicrostateModel:
    """Both sides always register +1; useful as a degenerate check."""
    return MicrostateModel(
        name="constant",
        possess_a=_constant_plus,
        possess_b=_constant_plus,
        detect_a=_always_detect,
        detect_b=_always_detect,
    )


def random_microstate_model(seed: int, name: str | None = None) -> MicrostateModel:
    """Random deterministic local model: rotated sign possession on each side
    with a random affine detection threshold in the rotated alignment."""
    rng = np.random.default_rng(seed)
    rotations = []
    for _ in range(2):
        q, r = np.linalg.qr(rng.normal(size=(3, 3)))
        rotations.append(q * np.sign(np.diag(r)))
    base_a, base_b = rng.uniform(0.3, 1.0, size=2)
    slope_a, slope_b = rng.uniform(-0.3, 0.7, size=2)
    return MicrostateModel(
        name=name if name is not None else f"random-{seed}",
        possess_a=partial(_rotated_sign, rotation=rotations[0]),
        possess_b=partial(_rotated_sign, rotation=rotations[1]),
        detect_a=partial(_threshold_detect, rotation=rotations[0], base=base_a, slope=slope_a),
        detect_b=partial(_threshold_detect, rotation=rotations[1], base=base_b, slope=slope_b),
    )


@dataclass(frozen=True)
class MicrostateEnsemble:
    """Finite mixture of microstates for one outcome of one observable:
    mixture weights, per-microstate detection probabilities, and 0/1
    possession indicators."""

    weights: tuple[float, ...]
    micro_detect: tuple[float, ...]
    micro_possess: tuple[float, ...]

    def __post_init__(self) -> None:
        weights = tuple(float(w) for w in self.weights)
        detect = tuple(float(d) for d in self.micro_detect)
        possess = tuple(float(p) for p in self.micro_possess)
        if not len(weights) == len(detect) == len(possess) or len(weights) == 0:
            raise InputValidationError("ensemble fields must share a positive length")
        if any(w < 0.0 for w in weights):
            raise InputValidationError("mixture weights must be nonnegative")
        if abs(sum(weights) - 1.0) > ALGEBRA_TOL:
            raise InputValidationError(f"mixture weights sum to {sum(weights)!r}, expected 1")
        if any(not 0.0 <= d <= 1.0 for d in detect):
            raise InputValidationError("micro detection probabilities must lie in [0, 1]")
        if any(p not in (0.0, 1.0) for p in possess):
            raise InputValidationError("possession indicators must be 0 or 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "micro_detect", detect)
        object.__setattr__(self, "micro_possess", possess)


class MixtureProbabilities(NamedTuple):
    absolute: float
    detection: float
    conditional: float


def mixture_probabilities(ensemble: MicrostateEnsemble) -> MixtureProbabilities:
    """Absolute, detection, and conditional probabilities of the ensemble's
    outcome, satisfying absolute = detection x conditional."""
    absolute = sum(
        w * d * p
        for w, d, p in zip(ensemble.weights, ensemble.micro_detect, ensemble.micro_possess)
    )
    detection = sum(w * d for w, d in zip(ensemble.weights, ensemble.micro_detect))
    if detection <= 0.0:
        raise ZeroProbabilityError(
            "conditional probability is undefined: the ensemble never registers"
        )
    return MixtureProbabilities(absolute, detection, absolute / detection)


def micro_observable_expectation(
    weights: Sequence[float],
    outcomes: Sequence[float],
    possession: Sequence[Sequence[float]],
) -> float:
    """Expectation of a microscopic observable over a microstate mixture.

    possession[n][i] is the 0/1 indicator that microstate i possesses
    outcome n; each microstate must possess exactly one outcome.
    """
    w = np.asarray(weights, dtype=float)
    values = np.asarray(outcomes, dtype=float)
    poss = np.asarray(possession, dtype=float)
    if w.ndim != 1 or np.any(w < 0.0) or abs(w.sum() - 1.0) > ALGEBRA_TOL:
        raise InputValidationError("weights must be a distribution")
    if poss.shape != (len(values), len(w)):
        raise InputValidationError(
            f"possession must have shape {(len(values), len(w))}, got {poss.shape}"
        )
    if not np.all((poss == 0.0) | (poss == 1.0)):
        raise InputValidationError("possession entries must be 0 or 1")
    if not np.all(poss.sum(axis=0) == 1.0):
        raise InputValidationError("each microstate must possess exactly one outcome")
    return float(values @ (poss @ w))


@dataclass(frozen=True, eq=False)
class SimulationSummary:
    """Registered-outcome tallies for one experiment.

    tallies[s, i, j] counts trials of setting s with A outcome (-1, 0, +1)[i]
    and B outcome (-1, 0, +1)[j]; every trial evaluates every setting.
    """

    n_trials: int
    settings: tuple[tuple[Direction, Direction], ...]
    tallies: np.ndarray
    seed: int

    def __post_init__(self) -> None:
        tallies = np.asarray(self.tallies, dtype=np.int64)
        if tallies.shape != (len(self.settings), 3, 3):
            raise InputValidationError(
                f"tallies must have shape {(len(self.settings), 3, 3)}, got {tallies.shape}"
            )
        if np.any(tallies < 0):
            raise InputValidationError("tallies cannot be negative")
        sums = tallies.sum(axis=(1, 2))
        if np.any(sums != self.n_trials):
            raise InputValidationError("each setting's tally must sum to n_trials")
        tallies.setflags(write=False)
        object.__setattr__(self, "tallies", tallies)

    def micro_correlation(self, index: int) -> float:
        """Mean product over all trials, no-registration outcomes counted as 0."""
        return float((self.tallies[index] * _PRODUCTS).sum() / self.n_trials)

    def micro_correlation_se(self, index: int) -> float:
        mean = self.micro_correlation(index)
        second = float((self.tallies[index] * _PRODUCTS**2).sum() / self.n_trials)
        return math.sqrt(max(0.0, second - mean * mean) / self.n_trials)

    def both_detected_count(self, index: int) -> int:
        block = self.tallies[index][np.ix_((0, 2), (0, 2))]
        return int(block.sum())

    def conditional_correlation(self, index: int) -> float:
        """Mean product over trials where both sides registered."""
        detected = self.both_detected_count(index)
        if detected == 0:
            raise ZeroProbabilityError(
                "conditional correlation is undefined: no doubly registered trials"
            )
        return float((self.tallies[index] * _PRODUCTS).sum() / detected)

    def conditional_correlation_se(self, index: int) -> float:
        detected = self.both_detected_count(index)
        if detected == 0:
            raise ZeroProbabilityError(
                "conditional correlation is undefined: no doubly registered trials"
            )
        mean = self.conditional_correlation(index)
        return math.sqrt(max(0.0, 1.0 - mean * mean) / detected)

    def detection_frequency(self, index: int, side: str) -> float:
        """Fraction of trials with a registered outcome on side "a" or "b"."""
        if side == "a":
            registered = self.tallies[index][(0, 2), :].sum()
        elif side == "b":
            registered = self.tallies[index][:, (0, 2)].sum()
        else:
            raise InputValidationError(f"side must be 'a' or 'b', got {side!r}")
        return float(registered / self.n_trials)

    def detection_frequency_se(self, index: int, side: str) -> float:
        freq = self.detection_frequency(index, side)
        return math.sqrt(freq * (1.0 - freq) / self.n_trials)


def _chunk_bounds(n_trials: int) -> list[int]:
    sizes = [CHUNK_SIZE] * (n_trials // CHUNK_SIZE)
    if n_trials % CHUNK_SIZE:
        sizes.append(n_trials % CHUNK_SIZE)
    return sizes


def _chunk_tallies(
    model: MicrostateModel,
    direction_pairs: Sequence[tuple[np.ndarray, np.ndarray]],
    size: int,
    seed: int,
    chunk_index: int,
    with_possession: bool,
) -> tuple[np.ndarray, np.ndarray | None]:
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(chunk_index,)))
    axes, u_a, u_b = model.sampler(rng, size)
    registered = np.zeros((len(direction_pairs), 3, 3), dtype=np.int64)
    possession = np.zeros((len(direction_pairs), 2, 2), dtype=np.int64) if with_possession else None
    for s_idx, (a_vec, b_vec) in enumerate(direction_pairs):
        value_a = np.asarray(model.possess_a(axes, a_vec), dtype=np.int64)
        value_b = np.asarray(model.possess_b(axes, b_vec), dtype=np.int64)
        detect_a = model.detect_a(axes, u_a, a_vec)
        detect_b = model.detect_b(axes, u_b, b_vec)
        reg_a = np.where(detect_a, value_a, 0)
        reg_b = np.where(detect_b, value_b, 0)
        cells = (reg_a + 1) * 3 + (reg_b + 1)
        registered[s_idx] = np.bincount(cells, minlength=9).reshape(3, 3)
        if possession is not None:
            cells = (value_a + 1) // 2 * 2 + (value_b + 1) // 2
            possession[s_idx] = np.bincount(cells, minlength=4).reshape(2, 2)
    return registered, possession


def _run_tallies(
    model: MicrostateModel,
    settings: Sequence[tuple[Direction, Direction]],
    n_trials: int,
    seed: int,
    n_workers: int,
    with_possession: bool,
) -> tuple[np.ndarray, np.ndarray | None]:
    if n_trials < 1:
        raise InputValidationError(f"n_trials must be positive, got {n_trials!r}")
    if int(seed) != seed or seed < 0:
        raise InputValidationError(f"seed must be a nonnegative integer, got {seed!r}")
    if n_workers < 1:
        raise InputValidationError(f"n_workers must be positive, got {n_workers!r}")
    if len(settings) == 0:
        raise InputValidationError("at least one setting is required")
    pairs = [(a.as_array(), b.as_array()) for a, b in settings]
    sizes = _chunk_bounds(n_trials)
    worker = partial(
        _chunk_tallies, model, pairs, with_possession=with_possession, seed=int(seed)
    )
    jobs = [(size, index) for index, size in enumerate(sizes)]
    if n_workers == 1 or len(jobs) == 1:
        results = [worker(size, chunk_index=index) for size, index in jobs]
    else:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            results = list(
                pool.map(lambda job: worker(job[0], chunk_index=job[1]), jobs)
            )
    registered = sum(reg for reg, _ in results)
    possession = sum(pos for _, pos in results) if with_possession else None
    return registered, possession


def run_experiment(
    model: MicrostateModel,
    settings: Sequence[tuple[Direction, Direction]],
    n_trials: int,
    seed: int,
    n_workers: int = 1,
) -> SimulationSummary:
    """Tally registered outcomes of a model over settings.

    The result is bit-identical for any n_workers; see the module docstring
    for the chunked substream scheme.
    """
    registered, _ = _run_tallies(model, settings, n_trials, seed, n_workers, False)
    return SimulationSummary(
        n_trials=n_trials,
        settings=tuple((a, b) for a, b in settings),
        tallies=registered,
        seed=int(seed),
    )


def estimate_micro_correlation(
    model: MicrostateModel,
    a: Direction,
    b: Direction,
    n_trials: int,
    seed: int,
    n_workers: int = 1,
) -> float:
    """Monte Carlo estimate of the all-trials product expectation."""
    return run_experiment(model, [(a, b)], n_trials, seed, n_workers).micro_correlation(0)


def chsh_pairs(setting: ChshSetting) -> tuple[tuple[Direction, Direction], ...]:
    """The four correlation pairs of a CHSH run, in tally order."""
    return (
        (setting.a, setting.b),
        (setting.a, setting.b_prime),
        (setting.a_prime, setting.b),
        (setting.a_prime, setting.b_prime),
    )


def summary_chsh(summary: SimulationSummary, conditional: bool = False) -> tuple[float, float]:
    """CHSH combination and its standard error from a four-pair summary."""
    if len(summary.settings) != 4:
        raise InputValidationError("summary must hold the four CHSH correlation pairs")
    if conditional:
        corr = [summary.conditional_correlation(i) for i in range(4)]
        errors = [summary.conditional_correlation_se(i) for i in range(4)]
    else:
        corr = [summary.micro_correlation(i) for i in range(4)]
        errors = [summary.micro_correlation_se(i) for i in range(4)]
    value = abs(corr[0] - corr[1]) + abs(corr[2] + corr[3])
    return value, math.sqrt(sum(e * e for e in errors))


def micro_chsh(
    model: MicrostateModel,
    setting: ChshSetting,
    n_trials: int,
    seed: int,
    n_workers: int = 1,
) -> float:
    """All-trials CHSH combination of a model at a setting."""
    summary = run_experiment(model, chsh_pairs(setting), n_trials, seed, n_workers)
    return summary_chsh(summary, conditional=False)[0]


class FairSamplingResult(NamedTuple):
    """Possession frequency of the (+1, +1) pair over all trials, registered
    frequency of that pair among doubly detected trials, and their gap."""

    all_sample_freq: float
    detected_freq: float
    divergence: float


def fair_sampling_check(
    model: MicrostateModel,
    a: Direction,
    b: Direction,
    n_trials: int,
    seed: int,
    n_workers: int = 1,
) -> FairSamplingResult:
    """Compare the (+1, +1) frequency over all trials with its frequency
    conditioned on double detection.

    A nonzero divergence is the signature of unfair sampling: the detected
    subensemble misrepresents the full one.
    """
    registered, possession = _run_tallies(model, [(a, b)], n_trials, seed, n_workers, True)
    assert possession is not None
    all_sample = float(possession[0][1, 1] / n_trials)
    both_detected = int(registered[0][np.ix_((0, 2), (0, 2))].sum())
    if both_detected == 0:
        raise ZeroProbabilityError(
            "detected-pair frequency is undefined: no doubly registered trials"
        )
    detected = float(registered[0][2, 2] / both_detected)
    return FairSamplingResult(all_sample, detected, abs(all_sample - detected))


@dataclass(frozen=True, eq=False)
class ChshSimulation:
    """Derived statistics of one CHSH Monte Carlo run."""

    setting: ChshSetting
    summary: SimulationSummary
    micro_correlations: tuple[float, float, float, float]
    micro_correlation_errors: tuple[float, float, float, float]
    conditional_correlations: tuple[float, float, float, float]
    conditional_correlation_errors: tuple[float, float, float, float]
    detection_frequencies_a: tuple[float, float, float, float]
    detection_frequencies_b: tuple[float, float, float, float]
    all_sample_pair_frequencies: tuple[float, float, float, float]
    detected_pair_frequencies: tuple[float, float, float, float]
    divergences: tuple[float, float, float, float]
    micro_chsh: float
    micro_chsh_error: float
    conditional_chsh: float
    conditional_chsh_error: float
    weighted_chsh_predicted: float
    weighted_chsh_predicted_error: float


def simulate_chsh(
    model: MicrostateModel,
    setting: ChshSetting,
    n_trials: int,
    seed: int,
    n_workers: int = 1,
) -> ChshSimulation:
    """Run a model over the four CHSH pairs and derive every reported metric.

    weighted_chsh_predicted applies the detection-weighted functional to the
    measured conditional correlations using per-role measured detection
    frequencies, so it should agree with the direct all-trials combination
    whenever the two sides' detections are independent.
    """
    registered, possession = _run_tallies(
        model, chsh_pairs(setting), n_trials, seed, n_workers, True
    )
    assert possession is not None
    summary = SimulationSummary(
        n_trials=n_trials,
        settings=chsh_pairs(setting),
        tallies=registered,
        seed=int(seed),
    )
    micro = tuple(summary.micro_correlation(i) for i in range(4))
    micro_se = tuple(summary.micro_correlation_se(i) for i in range(4))
    cond = tuple(summary.conditional_correlation(i) for i in range(4))
    cond_se = tuple(summary.conditional_correlation_se(i) for i in range(4))
    freq_a = tuple(summary.detection_frequency(i, "a") for i in range(4))
    freq_b = tuple(summary.detection_frequency(i, "b") for i in range(4))
    all_freq = []
    det_freq = []
    gaps = []
    for i in range(4):
        full = float(possession[i][1, 1] / n_trials)
        both = int(registered[i][np.ix_((0, 2), (0, 2))].sum())
        part = float(registered[i][2, 2] / both) if both else float("nan")
        all_freq.append(full)
        det_freq.append(part)
        gaps.append(abs(full - part))
    micro_value, micro_error = summary_chsh(summary, conditional=False)
    cond_value, cond_error = summary_chsh(summary, conditional=True)

    # Pool each role's detection frequency over the two pairs it enters.
    pa = (freq_a[0] + freq_a[1]) / 2.0
    pap = (freq_a[2] + freq_a[3]) / 2.0
    pb = (freq_b[0] + freq_b[2]) / 2.0
    pbp = (freq_b[1] + freq_b[3]) / 2.0
    predicted = abs(pa * (pb * cond[0] - pbp * cond[1])) + abs(
        pap * (pb * cond[2] + pbp * cond[3])
    )
    se_pa = math.sqrt(max(0.0, pa * (1.0 - pa)) / (2 * n_trials))
    se_pap = math.sqrt(max(0.0, pap * (1.0 - pap)) / (2 * n_trials))
    se_pb = math.sqrt(max(0.0, pb * (1.0 - pb)) / (2 * n_trials))
    se_pbp = math.sqrt(max(0.0, pbp * (1.0 - pbp)) / (2 * n_trials))
    predicted_error = math.sqrt(
        (pa * pb * cond_se[0]) ** 2
        + (pa * pbp * cond_se[1]) ** 2
        + (pap * pb * cond_se[2]) ** 2
        + (pap * pbp * cond_se[3]) ** 2
        + ((pb * cond[0] - pbp * cond[1]) * se_pa) ** 2
        + ((pb * cond[2] + pbp * cond[3]) * se_pap) ** 2
        + ((abs(pa * cond[0]) + abs(pap * cond[2])) * se_pb) ** 2
        + ((abs(pa * cond[1]) + abs(pap * cond[3])) * se_pbp) ** 2
    )
    return ChshSimulation(
        setting=setting,
        summary=summary,
        micro_correlations=micro,
        micro_correlation_errors=micro_se,
        conditional_correlations=cond,
        conditional_correlation_errors=cond_se,
        detection_frequencies_a=freq_a,
        detection_frequencies_b=freq_b,
        all_sample_pair_frequencies=tuple(all_freq),
        detected_pair_frequencies=tuple(det_freq),
        divergences=tuple(gaps),
        micro_chsh=micro_value,
        micro_chsh_error=micro_error,
        conditional_chsh=cond_value,
        conditional_chsh_error=cond_error,
        weighted_chsh_predicted=predicted,
        weighted_chsh_predicted_error=predicted_error,
    )
