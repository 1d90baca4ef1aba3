"""Acceptance gate: one test per shipping criterion, exact tolerances.

Each test prints a single PASS line on success (visible with -s or -rA);
pytest's own per-test verdict gives the same one-line-per-criterion view.
"""

import json
import time
from fractions import Fraction

from approxcommute import (
    ExampleParams,
    Subset,
    build_example,
    certify,
    commuting_probability,
    conjugacy_class_under,
    cyclic,
    default_corpus,
    dihedral,
    normal_subgroups,
    power,
    quaternion,
    random_symmetric_subset,
    ruzsa_cover,
    run_suite,
    statement_ids,
    subgroup_closure,
    symmetric,
    witness_thm1,
    witness_thm2,
)
from approxcommute.cli import main as cli_main
from approxcommute.rng import SplitMix64, derive_seed
from approxcommute.specio import canonical_json
from approxcommute.suite import SuiteConfig

from oracles import (
    inverse_map,
    oracle_commutator_subgroup,
    oracle_normal_subgroups,
    oracle_pr,
    oracle_product,
)


def _passed(criterion: int, message: str) -> None:
    print(f"ACCEPTANCE PASS criterion {criterion}: {message}")


def test_criterion_1_exact_values():
    t0 = time.perf_counter()
    s3, d4, q8 = symmetric(3), dihedral(4), quaternion(8)
    values = {}
    for name, group in (("S3", s3), ("D4", d4), ("Q8", q8)):
        full = Subset.full(group)
        got = commuting_probability(full, full)
        everyone = list(range(group.order))
        assert got == oracle_pr(everyone, everyone, group.mul)
        values[name] = got
    elapsed = time.perf_counter() - t0
    assert values["S3"] == Fraction(1, 2)
    assert values["D4"] == Fraction(5, 8)
    assert values["Q8"] == Fraction(5, 8)
    assert elapsed < 1.0, f"took {elapsed:.3f}s, budget 1s"
    _passed(1, f"pr(S3)=1/2, pr(D4)=pr(Q8)=5/8 in {elapsed:.3f}s")


def test_criterion_2_example_closed_forms():
    t0 = time.perf_counter()
    for n, k, u in ((2, 1, 1), (5, 2, 2), (6, 2, 3)):
        inst = build_example(ExampleParams(n, k, u))
        group = inst.group
        z = 2 * u
        full = Subset.full(group)
        a = inst.subset("A")
        a0 = inst.subset("A0")
        h = inst.subset("H")
        assert a.size == k * z + 1
        assert h.size == (1 << k) * z
        assert subgroup_closure(a) == h
        pr_a = commuting_probability(a, full)
        assert pr_a == Fraction(Fraction(k * z, n) + 1, k * z + 1)
        for g in a.id_list():
            if g:
                assert conjugacy_class_under(g, full).size == n
        pr_a0 = commuting_probability(a0, full)
        assert pr_a0 > Fraction(1, k + 1)
        assert pr_a / pr_a0 < (Fraction(1, n) + Fraction(1, k * z)) * (k + 1)
    elapsed = time.perf_counter() - t0
    assert elapsed < 30.0, f"took {elapsed:.1f}s, budget 30s"
    _passed(2, f"closed forms exact for three instances in {elapsed:.1f}s")


def test_criterion_3_certification():
    for n, k, u in ((2, 1, 1), (5, 2, 2), (6, 2, 3)):
        inst = build_example(ExampleParams(n, k, u))
        a = inst.subset("A")
        cert = certify(a, "exact")
        assert cert.k_cert <= k + 1, f"k_cert {cert.k_cert} > {k + 1}"
        covered = oracle_product(cert.cover.id_list(), a.id_list(), inst.group.mul)
        squared = {
            int(inst.group.mul[x, y]) for x in a.id_list() for y in a.id_list()
        }
        assert squared <= covered
    s4 = symmetric(4)
    subgroups = [
        Subset.full(symmetric(3)),
        Subset.full(dihedral(4)),
        Subset.full(quaternion(8)),
        Subset.full(cyclic(12)),
        subgroup_closure(Subset.singleton(s4, 1)),
        Subset.singleton(dihedral(4), 0),
        build_example(ExampleParams(3, 1, 1)).subset("H"),
        build_example(ExampleParams(3, 1, 1)).subset("Z"),
    ]
    for sub in subgroups:
        for mode in ("greedy", "exact"):
            assert certify(sub, mode).k_cert == 1
    _passed(3, "family A certifies at k <= k+1 with verified cover; subgroups at k = 1")


def test_criterion_4_statement_suite():
    t0 = time.perf_counter()
    config = SuiteConfig(
        order_cap=500, random_instances_per_statement=500, seed=1
    )
    config.run_witnesses = False
    report = run_suite(config)
    elapsed = time.perf_counter() - t0
    stats = report.payload["statements"]
    assert list(stats) == statement_ids() and len(stats) == 12
    for sid, agg in stats.items():
        assert agg["failures"] == 0, f"{sid}: {agg['failure_detail']}"
        assert agg["instances"] > 500, f"{sid}: only {agg['instances']} instances"
    assert report.failures == 0
    assert elapsed < 600.0, f"took {elapsed:.1f}s, budget 600s"
    total = sum(agg["instances"] for agg in stats.values())
    _passed(4, f"12 statements, {total} instances, 0 failures in {elapsed:.1f}s")


def test_criterion_5_witness_pipelines():
    groups = 0
    for group, _roles in default_corpus():
        if group.order > 500:
            continue
        groups += 1
        full = Subset.full(group)
        inv = inverse_map(group.mul)

        r1 = witness_thm1(full)
        comm = oracle_commutator_subgroup(
            r1.t.id_list(),
            r1.extractions[0].b_closure.id_list(),
            group.mul,
            inv,
        )
        assert len(comm) == r1.commutator_size, group.name
        assert r1.gamma >= r1.epsilon / (2 * r1.k_cert), group.name

        r2 = witness_thm2(full)
        overlap = (r2.c & power(full, 2)).size
        assert Fraction(overlap) >= r2.epsilon * r2.eta / 4 * full.size, group.name
        assert Fraction(r2.coset_count) <= Fraction(r2.k_cert**2) / r2.gamma, group.name
        assert isinstance(r2.c_prime_size, int) and r2.c_prime_size >= 1, group.name
    assert groups >= 30
    _passed(5, f"both witness pipelines verified on {groups} corpus groups")


def test_criterion_6_oracle_equivalence():
    checked = 0
    for group, _roles in default_corpus():
        if group.order > 200:
            continue
        expected = oracle_normal_subgroups(group.mul.tolist())
        got = {frozenset(s.id_list()) for s in normal_subgroups(group)}
        assert got == expected, group.name
        checked += 1

    small = [g for g, _ in default_corpus() if g.order <= 200]
    densities = (Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))
    for i in range(200):
        stream = SplitMix64(derive_seed(6, "ruzsa", i))
        group = small[stream.below(len(small))]
        a = random_symmetric_subset(group, densities[stream.below(4)], stream)
        yids = sorted({stream.below(group.order) for _ in range(1 + stream.below(6))})
        y = Subset.from_ids(group, yids)
        f = ruzsa_cover(a, y)
        ay = oracle_product(a.id_list(), yids, group.mul)
        assert f.size * y.size <= len(ay)
        inv = inverse_map(group.mul)
        yy = oracle_product(yids, [inv[g] for g in yids], group.mul)
        assert set(a.id_list()) <= oracle_product(f.id_list(), sorted(yy), group.mul)
    _passed(
        6,
        f"normal subgroups match brute force on {checked} groups; "
        "Ruzsa bounds hold on 200 seeded instances",
    )


def test_criterion_7_determinism(tmp_path, capsys):
    config = {
        "order_cap": 100,
        "random_instances_per_statement": 40,
        "seed": 123,
    }
    cfg_path = tmp_path / "config.json"
    cfg_path.write_text(json.dumps(config))
    outputs = []
    for run in range(2):
        out_path = tmp_path / f"report{run}.json"
        code = cli_main(
            ["verify", "--config", str(cfg_path), "--output", str(out_path)]
        )
        capsys.readouterr()
        assert code == 0
        outputs.append(json.loads(out_path.read_text()))
    for doc in outputs:
        assert doc.pop("timing", None) is not None
    first, second = (canonical_json(doc).encode() for doc in outputs)
    assert first == second
    _passed(7, f"two verify runs byte-identical ({len(first)} bytes) excluding timing")
