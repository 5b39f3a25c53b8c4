import random

import pytest

from oracles import subset_product
from subsetprod.errors import InputError
from subsetprod.groups import make_group
from subsetprod.parallel import (
    DistinguishedRecord,
    ParallelOptions,
    rho_solve_parallel,
)
from subsetprod.rho import Mask, RhoOptions, rho_solve
from subsetprod.sequences import (
    build_random_sequence,
    build_sequence,
    build_toy_sequence,
    descriptor_product,
)


def record_key(result):
    return sorted((r.point, r.walk_seed, r.steps) for r in result.records)


def test_toy_t0_matches_single_walk():
    # with t=0 every step reports, collapsing to stepwise collision detection
    seq, tgt = build_toy_sequence()
    start = Mask.from_indices("B", [1, 2, 3, 6], 6)
    single = rho_solve(seq, tgt.z, RhoOptions(eta_mode="toy-linear", start=start))
    par = rho_solve_parallel(
        seq, tgt.z,
        ParallelOptions(workers=1, dist_bits=0, eta_mode="toy-linear", start=start),
    )
    assert par.found
    assert par.descriptor == single.descriptor


def test_answers_verify():
    rng = random.Random(31)
    for desc, k in (("zn:10007", 30), ("curve:1009", 30), ("gl2:37", 44)):
        group = make_group(desc)
        seq, _ = build_random_sequence(group, k, seed=61)
        z = subset_product(group, seq.elems, rng.getrandbits(k))
        res = rho_solve_parallel(seq, z, ParallelOptions(workers=1, dist_bits=3, seed=5))
        assert res.found, desc
        assert descriptor_product(seq, res.descriptor) == z


def test_deterministic_across_worker_counts():
    seq, tgt = build_sequence("zn:100003", 40, seed=3, kind="random")
    results = {
        w: rho_solve_parallel(seq, tgt.z, ParallelOptions(workers=w, dist_bits=3, seed=11))
        for w in (1, 2, 8)
    }
    assert results[1].found
    assert results[1].descriptor == results[2].descriptor == results[8].descriptor
    assert record_key(results[1]) == record_key(results[2]) == record_key(results[8])


def test_budget_exhaustion():
    group = make_group("zn:64")
    from subsetprod.sequences import Sequence

    seq = Sequence(group, (2, 4, 6, 8, 10, 12), provenance="random")
    res = rho_solve_parallel(
        seq, 3, ParallelOptions(workers=1, dist_bits=0, seed=1, max_walks=40)
    )
    assert not res.found and res.budget_exhausted


def test_phi_evals_close_to_single_walk_expectation():
    from subsetprod.stats import expected_stats

    seq, tgt = build_sequence("curve:1048583", 40)
    res = rho_solve_parallel(
        seq, tgt.z, ParallelOptions(workers=4, dist_bits=6, seed=2, precompute_m=10)
    )
    assert res.found
    assert descriptor_product(seq, res.descriptor) == tgt.z
    model = expected_stats(seq.group.order, seq.size_a, seq.size_b)
    assert res.stats.phi_evals <= 3 * model.expected_rho_tot


def test_checkpoint_roundtrip(tmp_path):
    path = tmp_path / "walks.ckpt"
    seq, tgt = build_sequence("zn:100003", 40, seed=3, kind="random")
    opts = ParallelOptions(workers=1, dist_bits=3, seed=11, checkpoint_path=str(path))
    first = rho_solve_parallel(seq, tgt.z, opts)
    assert first.found
    text = path.read_text()
    assert len(text.strip().splitlines()) == len(first.records)
    # resuming from the full checkpoint finds the same answer without walking
    resumed = rho_solve_parallel(seq, tgt.z, opts)
    assert resumed.found and resumed.descriptor == first.descriptor
    assert resumed.stats.walks == 0


def test_checkpoint_corruption(tmp_path):
    path = tmp_path / "bad.ckpt"
    path.write_text("zz not-a-number 0 0\n")
    seq, tgt = build_sequence("zn:100003", 40, seed=3, kind="random")
    with pytest.raises(InputError):
        rho_solve_parallel(
            seq, tgt.z,
            ParallelOptions(workers=1, dist_bits=3, seed=11, checkpoint_path=str(path)),
        )


def test_checkpoint_predicate_validation(tmp_path):
    seq, tgt = build_sequence("zn:100003", 40, seed=3, kind="random")
    # a record whose point hash does not end in t zero bits must be rejected
    path = tmp_path / "tampered.ckpt"
    enc = seq.group.encode(12345)
    line = DistinguishedRecord(enc, 0, 1, 0).to_line()
    path.write_text(line + "\n")
    with pytest.raises(InputError):
        rho_solve_parallel(
            seq, tgt.z,
            ParallelOptions(workers=1, dist_bits=16, seed=11, checkpoint_path=str(path)),
        )


def test_records_satisfy_predicate():
    import hashlib

    from subsetprod.rho import _derive_key

    seq, tgt = build_sequence("zn:100003", 40, seed=3, kind="random")
    t = 3
    res = rho_solve_parallel(seq, tgt.z, ParallelOptions(workers=1, dist_bits=t, seed=11))
    key = _derive_key(11, b"dist", 0)
    for rec in res.records:
        h = hashlib.blake2b(rec.point, key=key, digest_size=8).digest()
        assert int.from_bytes(h, "little") & ((1 << t) - 1) == 0
