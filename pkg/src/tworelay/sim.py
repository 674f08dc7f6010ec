"""Toy-scale Monte Carlo run of the feedback compress-and-forward scheme.

One trial transmits B-1 messages over B blocks.  Within a block each relay
covers its observation with a quantization codeword; the sender, which saw
the relay observations through feedback, decodes the chosen pair; the next
block carries the bin indices of that pair on the relay inputs.  The
receiver runs four decoding steps per message: the bin pair, the two
bin-and-ambiguity-list intersections, and the message itself.

Error accounting is first-failure-per-message: the seven stages are checked
in pipeline order with ground-truth inputs (a failed stage does not corrupt
the later blocks), so every failure is attributed to exactly one stage.

Codebooks are materialized, so ``SimConfig`` enforces a hard cap on the
total codeword count.  The covering experiment alone also has an analytic
path for books far past the cap: conditioned on the drawn observation pair,
the number of typical book entries is binomial, so the hit probability of
an astronomically large book is computable without building it.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp
from scipy.stats import binom

from .prob import (
    CondPmf,
    JointPmf,
    NetworkChannel,
    ResourceLimitError,
    T1Law,
    ValidationError,
    assemble_joint_t1,
    conditional,
    marginalize,
)
from .rates import T1Rates

MAX_TOTAL_CODEWORDS = 1_000_000

STAGES = (
    "relay1-covering",
    "relay2-covering",
    "sender-joint-covering",
    "receiver-(s1,s2)",
    "receiver-bin-intersection-1",
    "receiver-bin-intersection-2",
    "receiver-message",
)


@dataclass(frozen=True)
class TypicalityParams:
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.epsilon < 1.0:
            raise ValidationError(f"epsilon must be in (0, 1), got {self.epsilon}")


def typical(sequences, joint: JointPmf, params: TypicalityParams | float) -> bool:
    """Robust joint typicality of aligned symbol sequences.

    ``sequences`` holds one integer array per joint axis, in axis order.
    True iff every cell's empirical frequency is within relative deviation
    epsilon of the cell mass, and exactly zero on zero-mass cells.
    """
    eps = params.epsilon if isinstance(params, TypicalityParams) else float(params)
    if len(sequences) != len(joint.axes):
        raise ValidationError(
            f"{len(sequences)} sequences for {len(joint.axes)} joint axes"
        )
    seqs = [np.asarray(s) for s in sequences]
    n = len(seqs[0])
    if any(len(s) != n for s in seqs):
        raise ValidationError("sequences differ in length")
    shape = tuple(a.size for a in joint.axes)
    flat = np.ravel_multi_index(seqs, shape)
    freq = np.bincount(flat, minlength=joint.mass.size) / n
    p = joint.mass.reshape(-1)
    return bool(np.all(np.abs(freq - p) <= eps * p))


def quantize_rate(rate: float, n: int) -> float:
    """Nearest multiple of 1/n, so the codebook size is an exact power of 2."""
    return round(rate * n) / n


def _book_size(rate: float, n: int) -> int:
    return 1 << round(rate * n)


@dataclass(frozen=True)
class SimConfig:
    n: int
    blocks: int
    rates: T1Rates
    typicality: TypicalityParams
    trials: int
    seed: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"block length {self.n} < 1")
        if self.blocks < 2:
            raise ValidationError(f"need at least 2 blocks, got {self.blocks}")
        if self.trials < 1:
            raise ValidationError(f"trials {self.trials} < 1")
        for name in ("rbar", "rh1", "rh2", "rs1", "rs2"):
            if getattr(self.rates, name) < 0:
                raise ValidationError(f"rate {name} is negative")
        total = self.total_codewords()
        if total > MAX_TOTAL_CODEWORDS:
            raise ResourceLimitError(
                f"{total} codewords exceed the cap of {MAX_TOTAL_CODEWORDS}"
            )

    def quantized_rates(self) -> T1Rates:
        q = lambda r: quantize_rate(r, self.n)
        r = self.rates
        return T1Rates(q(r.rbar), q(r.rh1), q(r.rh2), q(r.rs1), q(r.rs2))

    def book_sizes(self) -> dict[str, int]:
        r, n = self.rates, self.n
        return {
            "w": _book_size(r.rbar, n),
            "s1": _book_size(r.rs1, n),
            "s2": _book_size(r.rs2, n),
            "z1": _book_size(r.rh1, n),
            "z2": _book_size(r.rh2, n),
        }

    def total_codewords(self) -> int:
        s = self.book_sizes()
        return (
            s["s1"]
            + s["s2"]
            + s["w"] * s["s1"] * s["s2"]
            + s["z1"] * s["s1"]
            + s["z2"] * s["s2"]
        )


@dataclass(frozen=True)
class Codebooks:
    """Random codeword tensors, one row of length n per index tuple."""

    x1: np.ndarray  # (s1, n)
    x2: np.ndarray  # (s2, n)
    x0: np.ndarray  # (w, s1, s2, n)
    yh1: np.ndarray  # (z1, s1, n)
    yh2: np.ndarray  # (z2, s2, n)
    n: int


@dataclass(frozen=True)
class BinMaps:
    """Uniform random assignment of compression indices to relay-input cells."""

    bin1: np.ndarray  # (z1,) values in [0, s1)
    bin2: np.ndarray  # (z2,) values in [0, s2)


@dataclass(frozen=True)
class SimStats:
    stage_errors: dict[str, int]
    trials: int
    blocks_decoded: int
    n: int
    blocks: int
    quantized_rates: T1Rates

    def __post_init__(self):
        if set(self.stage_errors) != set(STAGES):
            raise ValidationError("stage_errors must cover exactly the known stages")
        if sum(self.stage_errors.values()) > self.blocks_decoded:
            raise ValidationError("more first errors than decoded blocks")

    def to_dict(self) -> dict:
        return {
            "format_version": 1,
            "kind": "simulation",
            "n": self.n,
            "blocks": self.blocks,
            "trials": self.trials,
            "blocks_decoded": self.blocks_decoded,
            "quantized_rates": {
                "rbar": self.quantized_rates.rbar,
                "rh1": self.quantized_rates.rh1,
                "rh2": self.quantized_rates.rh2,
                "rs1": self.quantized_rates.rs1,
                "rs2": self.quantized_rates.rs2,
            },
            "stage_errors": {stage: self.stage_errors[stage] for stage in STAGES},
        }

    def to_csv(self) -> str:
        head = ["n", "blocks", "trials", "blocks_decoded", *STAGES]
        row = [
            self.n,
            self.blocks,
            self.trials,
            self.blocks_decoded,
            *(self.stage_errors[stage] for stage in STAGES),
        ]
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(head)
        writer.writerow(row)
        return out.getvalue()


# ---------------------------------------------------------------------------
# sampling helpers
# ---------------------------------------------------------------------------


def _draw_joint(rng, pmf: JointPmf, n: int) -> tuple[np.ndarray, ...]:
    flat = pmf.mass.reshape(-1)
    idx = rng.choice(flat.size, size=n, p=flat)
    return tuple(np.asarray(a) for a in np.unravel_index(idx, pmf.mass.shape))


def _draw_cond(rng, cond: CondPmf, given_seqs) -> tuple[np.ndarray, ...]:
    """Per-position draw of the target tuple from the row its givens select.

    Positions are grouped by conditioning cell and cells visited in index
    order, so the draw sequence is a pure function of rng state and inputs.
    """
    n = len(given_seqs[0]) if given_seqs else None
    if n is None:
        raise ValidationError("need at least one conditioning sequence")
    g_shape = tuple(a.size for a in cond.given)
    t_shape = tuple(a.size for a in cond.target)
    rows = cond.mass.reshape(int(np.prod(g_shape)), int(np.prod(t_shape)))
    cells = np.ravel_multi_index([np.asarray(s) for s in given_seqs], g_shape)
    out = np.empty(n, dtype=np.int64)
    for cell in range(rows.shape[0]):
        mask = cells == cell
        count = int(mask.sum())
        if count:
            out[mask] = rng.choice(rows.shape[1], size=count, p=rows[cell])
    return tuple(np.asarray(a) for a in np.unravel_index(out, t_shape))


def build(channel: NetworkChannel, law: T1Law, cfg: SimConfig) -> tuple[Codebooks, BinMaps]:
    """Draw every codebook and both bin maps from one seeded stream."""
    sizes = cfg.book_sizes()
    if cfg.total_codewords() > MAX_TOTAL_CODEWORDS:
        raise ResourceLimitError("codebook cap exceeded")
    rng = np.random.default_rng([cfg.seed, 0])
    n = cfg.n
    joint = assemble_joint_t1(channel, law)

    x1 = np.stack([_draw_joint(rng, law.px1, n)[0] for _ in range(sizes["s1"])])
    x2 = np.stack([_draw_joint(rng, law.px2, n)[0] for _ in range(sizes["s2"])])

    x0 = np.empty((sizes["w"], sizes["s1"], sizes["s2"], n), dtype=np.int64)
    for s1 in range(sizes["s1"]):
        for s2 in range(sizes["s2"]):
            for w in range(sizes["w"]):
                (x0[w, s1, s2],) = _draw_cond(
                    rng, law.px0_given_x1x2, (x1[s1], x2[s2])
                )

    # quantization books follow the compression variable's law given the
    # relay input, i.e. the exact conditional of the assembled joint
    p_yh1 = conditional(joint, ("Yh1",), ("X1",))
    p_yh2 = conditional(joint, ("Yh2",), ("X2",))
    yh1 = np.empty((sizes["z1"], sizes["s1"], n), dtype=np.int64)
    for s1 in range(sizes["s1"]):
        for z1 in range(sizes["z1"]):
            (yh1[z1, s1],) = _draw_cond(rng, p_yh1, (x1[s1],))
    yh2 = np.empty((sizes["z2"], sizes["s2"], n), dtype=np.int64)
    for s2 in range(sizes["s2"]):
        for z2 in range(sizes["z2"]):
            (yh2[z2, s2],) = _draw_cond(rng, p_yh2, (x2[s2],))

    bins = BinMaps(
        bin1=rng.integers(0, sizes["s1"], size=sizes["z1"]),
        bin2=rng.integers(0, sizes["s2"], size=sizes["z2"]),
    )
    return Codebooks(x1, x2, x0, yh1, yh2, n), bins


# ---------------------------------------------------------------------------
# the block-Markov run
# ---------------------------------------------------------------------------


def _first_typical(candidates, eps) -> int | None:
    for index, seqs, joint in candidates:
        if typical(seqs, joint, eps):
            return index
    return None


def _unique_typical(candidates, eps):
    """The only typical index, or None when there are zero or several."""
    found = None
    for index, seqs, joint in candidates:
        if typical(seqs, joint, eps):
            if found is not None:
                return None
            found = index
    return found


def run_cf(channel: NetworkChannel, law: T1Law, cfg: SimConfig) -> SimStats:
    books, bins = build(channel, law, cfg)
    joint = assemble_joint_t1(channel, law)
    eps = cfg.typicality

    m_cover1 = marginalize(joint, ("X1", "Y1", "Yh1"))
    m_cover2 = marginalize(joint, ("X2", "Y2", "Yh2"))
    m_sender = marginalize(joint, ("X1", "X2", "Y1", "Y2", "Yh1", "Yh2"))
    m_pair = marginalize(joint, ("X1", "X2", "Y0"))
    m_list1 = marginalize(joint, ("X1", "Y0", "Yh1"))
    m_list2 = marginalize(joint, ("X2", "Y0", "Yh2"))
    m_msg = marginalize(joint, ("X0", "X1", "X2", "Y0", "Yh1", "Yh2"))

    sizes = cfg.book_sizes()
    counts = {stage: 0 for stage in STAGES}
    decoded = 0

    for trial in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, 1, trial])
        blocks = []
        s1_cur, s2_cur = 0, 0
        # transmit all B blocks first; the message of the last block is a
        # placeholder since only B-1 messages are decodable
        for b in range(cfg.blocks):
            w = int(rng.integers(0, sizes["w"])) if b < cfg.blocks - 1 else 0
            x0_seq = books.x0[w, s1_cur, s2_cur]
            x1_seq = books.x1[s1_cur]
            x2_seq = books.x2[s2_cur]
            y0, y1, y2 = _draw_cond(
                rng, channel.transition, (x0_seq, x1_seq, x2_seq)
            )
            z1 = _first_typical(
                (
                    (z, (x1_seq, y1, books.yh1[z, s1_cur]), m_cover1)
                    for z in range(sizes["z1"])
                ),
                eps,
            )
            z2 = _first_typical(
                (
                    (z, (x2_seq, y2, books.yh2[z, s2_cur]), m_cover2)
                    for z in range(sizes["z2"])
                ),
                eps,
            )
            blocks.append(
                dict(w=w, s1=s1_cur, s2=s2_cur, z1=z1, z2=z2,
                     y0=y0, y1=y1, y2=y2, x1=x1_seq, x2=x2_seq)
            )
            # ground-truth carryover; a covering miss forwards cell 0
            s1_cur = int(bins.bin1[z1]) if z1 is not None else 0
            s2_cur = int(bins.bin2[z2]) if z2 is not None else 0

        for b in range(cfg.blocks - 1):
            decoded += 1
            cur, nxt = blocks[b], blocks[b + 1]
            if cur["z1"] is None:
                counts["relay1-covering"] += 1
                continue
            if cur["z2"] is None:
                counts["relay2-covering"] += 1
                continue

            pair = _unique_typical(
                (
                    (
                        (za, zb),
                        (
                            cur["x1"],
                            cur["x2"],
                            cur["y1"],
                            cur["y2"],
                            books.yh1[za, cur["s1"]],
                            books.yh2[zb, cur["s2"]],
                        ),
                        m_sender,
                    )
                    for za in range(sizes["z1"])
                    for zb in range(sizes["z2"])
                ),
                eps,
            )
            if pair != (cur["z1"], cur["z2"]):
                counts["sender-joint-covering"] += 1
                continue

            cells = _unique_typical(
                (
                    (
                        (sa, sb),
                        (books.x1[sa], books.x2[sb], nxt["y0"]),
                        m_pair,
                    )
                    for sa in range(sizes["s1"])
                    for sb in range(sizes["s2"])
                ),
                eps,
            )
            if cells != (nxt["s1"], nxt["s2"]):
                counts["receiver-(s1,s2)"] += 1
                continue

            hits1 = [
                z
                for z in range(sizes["z1"])
                if bins.bin1[z] == nxt["s1"]
                and typical(
                    (cur["x1"], cur["y0"], books.yh1[z, cur["s1"]]), m_list1, eps
                )
            ]
            if hits1 != [cur["z1"]]:
                counts["receiver-bin-intersection-1"] += 1
                continue
            hits2 = [
                z
                for z in range(sizes["z2"])
                if bins.bin2[z] == nxt["s2"]
                and typical(
                    (cur["x2"], cur["y0"], books.yh2[z, cur["s2"]]), m_list2, eps
                )
            ]
            if hits2 != [cur["z2"]]:
                counts["receiver-bin-intersection-2"] += 1
                continue

            w_hat = _unique_typical(
                (
                    (
                        w,
                        (
                            books.x0[w, cur["s1"], cur["s2"]],
                            cur["x1"],
                            cur["x2"],
                            cur["y0"],
                            books.yh1[cur["z1"], cur["s1"]],
                            books.yh2[cur["z2"], cur["s2"]],
                        ),
                        m_msg,
                    )
                    for w in range(sizes["w"])
                ),
                eps,
            )
            if w_hat != cur["w"]:
                counts["receiver-message"] += 1

    return SimStats(
        counts, cfg.trials, decoded, cfg.n, cfg.blocks, cfg.quantized_rates()
    )


# ---------------------------------------------------------------------------
# covering experiment
# ---------------------------------------------------------------------------

COVERING_EPSILON = 0.15

# books at most this large are searched entry by entry; beyond it a binary
# quantization alphabet switches to the closed-form hit probability
SMALL_BOOK_CUTOFF = 4096


def _log_box_probability(n_group: int, p_hit: float, lo: int, hi: int) -> float:
    """log P(lo <= Binomial(n_group, p_hit) <= hi), -inf when empty."""
    lo = max(lo, 0)
    hi = min(hi, n_group)
    if hi < lo:
        return -math.inf
    logs = binom.logpmf(np.arange(lo, hi + 1), n_group, p_hit)
    return float(logsumexp(logs))


def _count_window(p_cell: float, n: int, eps: float) -> tuple[int, int]:
    # admissible absolute count for one joint cell; zero-mass cells pin it
    if p_cell == 0.0:
        return 0, 0
    return math.ceil(n * p_cell * (1.0 - eps)), math.floor(n * p_cell * (1.0 + eps))


def _log_one_draw_typical(
    x1_seq, y1_seq, p_book: CondPmf, p_triple: JointPmf, eps: float
) -> float:
    """log probability that one book entry is jointly typical with the pair.

    The entry is drawn i.i.d. from the book law given the relay input, so
    within each (x1, y1) position group the count landing on quantization
    letter 0 is binomial, the letter-1 count is its complement, and the
    groups are independent.  Binary quantization alphabets only.
    """
    n = len(x1_seq)
    k1, ky, kq = (axis.size for axis in p_triple.axes)
    if kq != 2:
        raise ResourceLimitError(
            "analytic covering path needs a binary quantization alphabet"
        )
    book_rows = p_book.mass.reshape(k1, kq)
    total = 0.0
    for a in range(k1):
        for b in range(ky):
            group = int(np.sum((x1_seq == a) & (y1_seq == b)))
            lo0, hi0 = _count_window(float(p_triple.mass[a, b, 0]), n, eps)
            lo1, hi1 = _count_window(float(p_triple.mass[a, b, 1]), n, eps)
            total += _log_box_probability(
                group, float(book_rows[a, 0]), max(lo0, group - hi1), min(hi0, group - lo1)
            )
            if total == -math.inf:
                return total
    return total


def covering_experiment(
    law: T1Law,
    channel: NetworkChannel,
    rh1: float,
    n: int,
    trials: int,
    seed: int,
    epsilon: float = COVERING_EPSILON,
) -> float:
    """Fraction of trials where the quantization book covers the observation.

    Each trial draws a fresh relay-input/observation pair and a fresh book
    of 2^round(n*rh1) entries (rate quantized to 1/n).  Books small enough
    to materialize are searched literally; larger ones use the exact
    binomial form of the at-least-one-typical-entry probability, so the
    threshold is testable at rates whose books could never be built.
    """
    if n < 1:
        raise ValidationError(f"block length {n} < 1")
    if trials < 1:
        raise ValidationError(f"trials {trials} < 1")
    if rh1 < 0:
        raise ValidationError(f"negative rate {rh1}")
    eps = TypicalityParams(epsilon).epsilon
    joint = assemble_joint_t1(channel, law)
    p_pair = marginalize(joint, ("X1", "Y1"))
    p_triple = marginalize(joint, ("X1", "Y1", "Yh1"))
    p_book = conditional(joint, ("Yh1",), ("X1",))
    exponent = round(rh1 * n)
    size = 1 << exponent
    binary_book = p_triple.axes[-1].size == 2
    literal = size <= SMALL_BOOK_CUTOFF or not binary_book
    if literal and size > MAX_TOTAL_CODEWORDS:
        raise ResourceLimitError(
            f"book of {size} codewords exceeds the cap of {MAX_TOTAL_CODEWORDS} "
            "and no analytic path exists for this quantization alphabet"
        )

    successes = 0
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        x1_seq, y1_seq = _draw_joint(rng, p_pair, n)
        if literal:
            hit = False
            for _ in range(size):
                (yh_seq,) = _draw_cond(rng, p_book, (x1_seq,))
                if typical((x1_seq, y1_seq, yh_seq), p_triple, eps):
                    hit = True
                    break
            successes += hit
        else:
            log_q = _log_one_draw_typical(x1_seq, y1_seq, p_book, p_triple, eps)
            # success probability 1 - (1 - q)^M with q often far below float
            # range; fall back to the Poisson form through ln(M*q)
            ln_mean = exponent * math.log(2.0) + log_q
            if ln_mean > 36.0:
                prob = 1.0
            elif log_q > -30.0 and exponent < 50:
                prob = -math.expm1(size * math.log1p(-math.exp(log_q)))
            else:
                prob = -math.expm1(-math.exp(ln_mean))
            successes += rng.random() < prob
    return successes / trials
