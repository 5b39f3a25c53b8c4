"""Distinguished-points collision engine.

Many independent walks share one iteration map; each walk reports the
points whose keyed hash ends in t zero bits, and a central table matches
reports across walks.  Both cross-walk and self collisions are usable.
Walks merge one step after any product or hash collision, so two walks
that report the same distinguished product value can be replayed from
their seeds to recover colliding predecessors.

Walk streams are pure functions of (global seed, walk id), and the matcher
consumes them in walk-id order, so results are reproducible for any worker
count; workers only parallelize stream generation.
"""

from __future__ import annotations

import hashlib
import multiprocessing
import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import InputError, UsageError
from .rho import (
    CPoint,
    EtaSpec,
    WalkEngine,
    _derive_key,
    _pack,
    _unpack,
    build_precompute_table,
    random_cpoint,
)
from .sequences import Mask, Sequence, SubsetDescriptor, assemble_answer


@dataclass(frozen=True)
class DistinguishedRecord:
    point: bytes
    walk_seed: int
    steps: int
    worker_id: int

    def to_line(self) -> str:
        return f"{self.point.hex()} {self.walk_seed} {self.steps} {self.worker_id}"

    @classmethod
    def from_line(cls, line: str) -> "DistinguishedRecord":
        parts = line.split()
        if len(parts) != 4:
            raise InputError(f"bad checkpoint line: {line!r}")
        try:
            return cls(bytes.fromhex(parts[0]), int(parts[1]), int(parts[2]), int(parts[3]))
        except ValueError:
            raise InputError(f"bad checkpoint line: {line!r}") from None


@dataclass(frozen=True)
class ParallelOptions:
    workers: int = 1
    dist_bits: Optional[int] = None
    alpha: int = 4
    seed: int = 0
    eta_mode: str = "keyed-hash"
    multiplier: int = 96
    precompute_m: Optional[int] = None
    max_walks: int = 100_000
    records_per_walk: int = 4096
    batch_size: int = 16
    checkpoint_path: Optional[str] = None
    start: Optional[CPoint] = None


@dataclass
class ParallelStats:
    walks: int = 0
    records: int = 0
    collisions: int = 0
    phi_evals: int = 0
    group_ops: int = 0


@dataclass
class ParallelResult:
    descriptor: Optional[SubsetDescriptor]
    found: bool
    budget_exhausted: bool
    stats: ParallelStats
    records: List[DistinguishedRecord] = field(default_factory=list)


def default_dist_bits(seq: Sequence) -> int:
    n = seq.group.order
    if n is None:
        return 12
    import math

    return max(0, math.ceil(math.log2(math.isqrt(n) + 1) / 2))


def _is_distinguished(enc: bytes, dist_key: bytes, t_bits: int) -> bool:
    if t_bits == 0:
        return True
    h = hashlib.blake2b(enc, key=dist_key, digest_size=8).digest()
    return int.from_bytes(h, "little") & ((1 << t_bits) - 1) == 0


def _start_packed(seq: Sequence, seed: int, walk_seed: int) -> int:
    return _pack(random_cpoint(seq, seed, walk_seed), seq)


def _run_walk(
    engine: WalkEngine,
    seq: Sequence,
    seed: int,
    walk_seed: int,
    dist_key: bytes,
    t_bits: int,
    stretch_cap: int,
    rec_cap: int,
    worker_id: int,
    forced_start: Optional[int] = None,
) -> List[DistinguishedRecord]:
    """One walk's record stream: runs until it reports a value it already
    reported (it is cycling), exceeds the no-report stretch cap, or fills
    its record budget."""
    packed = forced_start if forced_start is not None else _start_packed(seq, seed, walk_seed)
    records: List[DistinguishedRecord] = []
    seen = set()
    steps = 0
    since_last = 0
    encode = seq.group.encode
    while len(records) < rec_cap:
        g = engine.value(packed)
        enc = encode(g)
        if _is_distinguished(enc, dist_key, t_bits):
            records.append(DistinguishedRecord(enc, walk_seed, steps, worker_id))
            if enc in seen:
                break  # self collision; the walk is trapped on a cycle
            seen.add(enc)
            since_last = 0
        else:
            since_last += 1
            if since_last > stretch_cap:
                break  # abandoned
        packed = engine.eta_packed(g)
        engine.phi_evals += 1
        steps += 1
    return records


# Worker-process state, inherited through fork and finished by _init_worker.
_WORKER: dict = {}


def _init_worker(seq, z, spec, table, seed, dist_key, t_bits, stretch_cap, rec_cap, workers):
    _WORKER.update(
        engine=WalkEngine(seq, z, spec, table),
        seq=seq,
        z=z,
        seed=seed,
        dist_key=dist_key,
        t_bits=t_bits,
        stretch_cap=stretch_cap,
        rec_cap=rec_cap,
        workers=workers,
    )


def _walk_batch(args: Tuple[int, int, Optional[int]]):
    first_id, count, forced_start = args
    engine: WalkEngine = _WORKER["engine"]
    out = []
    for walk_seed in range(first_id, first_id + count):
        phi0, ops0 = engine.phi_evals, engine.group_ops
        recs = _run_walk(
            engine,
            _WORKER["seq"],
            _WORKER["seed"],
            walk_seed,
            _WORKER["dist_key"],
            _WORKER["t_bits"],
            _WORKER["stretch_cap"],
            _WORKER["rec_cap"],
            worker_id=walk_seed % _WORKER["workers"],
            forced_start=forced_start if walk_seed == 0 else None,
        )
        out.append((recs, engine.phi_evals - phi0, engine.group_ops - ops0))
    return out


def _replay_pair(
    engine: WalkEngine,
    seq: Sequence,
    seed: int,
    rec_a: DistinguishedRecord,
    rec_b: DistinguishedRecord,
    forced_start: Optional[int],
) -> Optional[Tuple[Mask, Mask]]:
    """Recover colliding predecessors from two reports of one value: align
    both walks at equal remaining distance, then advance in lockstep to the
    first common state."""

    def start_of(rec):
        if rec.walk_seed == 0 and forced_start is not None:
            return forced_start
        return _start_packed(seq, seed, rec.walk_seed)

    long_rec, short_rec = (rec_a, rec_b) if rec_a.steps >= rec_b.steps else (rec_b, rec_a)
    p_long = start_of(long_rec)
    for _ in range(long_rec.steps - short_rec.steps):
        p_long = engine.step(p_long)
    p_short = start_of(short_rec)
    if p_long == p_short:
        return None  # one start lies on the other walk's path
    for _ in range(short_rec.steps + 1):
        prev_long, p_long = p_long, engine.step(p_long)
        prev_short, p_short = p_short, engine.step(p_short)
        if p_long == p_short:
            return _unpack(prev_long, seq), _unpack(prev_short, seq)
    return None


def rho_solve_parallel(
    seq: Sequence, z, opts: ParallelOptions = ParallelOptions()
) -> ParallelResult:
    """Distinguished-points search for a short product representation."""
    if opts.workers < 1:
        raise UsageError("workers must be >= 1")
    t_bits = opts.dist_bits if opts.dist_bits is not None else default_dist_bits(seq)
    if t_bits < 0:
        raise UsageError("dist_bits must be >= 0")
    table = (
        build_precompute_table(seq, opts.precompute_m)
        if opts.precompute_m is not None
        else None
    )
    spec = EtaSpec(
        mode=opts.eta_mode,
        key=_derive_key(opts.seed, b"eta-parallel", 0),
        multiplier=opts.multiplier,
    )
    dist_key = _derive_key(opts.seed, b"dist", 0)
    stretch_cap = 1 << (t_bits + opts.alpha)
    forced_start = _pack(opts.start, seq) if opts.start is not None else None

    main_engine = WalkEngine(seq, z, spec, table)
    stats = ParallelStats()
    seen_points: Dict[bytes, DistinguishedRecord] = {}
    processed: List[DistinguishedRecord] = []
    checkpoint_file = None

    def process_record(rec: DistinguishedRecord) -> Tuple[Optional[Tuple[Mask, Mask]], bool]:
        """Insert one record; on a table hit, replay and test the collision.
        Returns (answer masks or None, whether the record hit the table)."""
        stats.records += 1
        processed.append(rec)
        if checkpoint_file is not None:
            checkpoint_file.write(rec.to_line() + "\n")
            checkpoint_file.flush()
        other = seen_points.get(rec.point)
        if other is None:
            seen_points[rec.point] = rec
            return None, False
        if other.walk_seed == rec.walk_seed and other.steps == rec.steps:
            return None, False  # duplicate line (checkpoint replay)
        stats.collisions += 1
        pair = _replay_pair(main_engine, seq, opts.seed, other, rec, forced_start)
        if pair is None:
            return None, True
        s, t = pair
        pi_s = main_engine.value(_pack(s, seq))
        pi_t = main_engine.value(_pack(t, seq))
        if pi_s != pi_t or s.side == t.side:
            return None, True
        return ((s, t) if s.side == "A" else (t, s)), True

    def finish(descriptor, found, exhausted) -> ParallelResult:
        stats.phi_evals += main_engine.phi_evals
        stats.group_ops += main_engine.group_ops
        if checkpoint_file is not None:
            checkpoint_file.close()
        return ParallelResult(descriptor, found, exhausted, stats, processed)

    # Resume support: re-process previously written records.
    preloaded: List[DistinguishedRecord] = []
    if opts.checkpoint_path is not None and os.path.exists(opts.checkpoint_path):
        with open(opts.checkpoint_path, "r", encoding="ascii") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                rec = DistinguishedRecord.from_line(line)
                if not _is_distinguished(rec.point, dist_key, t_bits):
                    raise InputError(
                        f"checkpoint record fails the distinguishing predicate: {line!r}"
                    )
                preloaded.append(rec)
    for rec in preloaded:
        answer, _ = process_record(rec)
        if answer is not None:
            x, y = answer
            return finish(assemble_answer(seq, z, x, y), True, False)
    if opts.checkpoint_path is not None:
        checkpoint_file = open(opts.checkpoint_path, "a", encoding="ascii")

    batches = [
        (first, min(opts.batch_size, opts.max_walks - first), forced_start)
        for first in range(0, opts.max_walks, opts.batch_size)
    ]
    init_args = (
        seq, z, spec, table, opts.seed, dist_key, t_bits,
        stretch_cap, opts.records_per_walk, opts.workers,
    )

    def consume(batch_results) -> Optional[ParallelResult]:
        for recs, walk_phi, walk_ops in batch_results:
            stats.walks += 1
            stats.phi_evals += walk_phi
            stats.group_ops += walk_ops
            for rec in recs:
                answer, hit = process_record(rec)
                if answer is not None:
                    x, y = answer
                    return finish(assemble_answer(seq, z, x, y), True, False)
                if hit:
                    break  # walk has merged with an already-seen trajectory
        return None

    if opts.workers == 1:
        _init_worker(*init_args)
        for batch in batches:
            result = consume(_walk_batch(batch))
            if result is not None:
                return result
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(opts.workers, initializer=_init_worker, initargs=init_args) as pool:
            for result_batch in pool.imap(_walk_batch, batches):
                result = consume(result_batch)
                if result is not None:
                    pool.terminate()
                    return result
    return finish(None, False, True)
