"""Suite runner: every registered statement over a corpus plus seeded random instances.

The corpus pass enumerates structured instances (all normal subgroups, all
cyclic subgroups, every element where feasible); the random pass draws
instances from per-(statement, index) derived PRNG streams, so any failure is
reproducible from the seed and the instance key alone, independent of how
many other statements ran.  Reports are deterministic: the only
non-reproducible content lives under the separate "timing" key.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Optional

from .approx import ApproxCertificate, certify
from .errors import SpecParseError
from .group import Group, normal_subgroups, subgroup_closure
from .rng import SplitMix64, derive_seed
from .specio import (
    SCHEMA_VERSION,
    check_to_dict,
    load_group,
    rational_str,
    witness_to_dict,
)
from .statements import CheckResult, check, statement_ids
from .subset import Subset, symmetrize, with_identity
from .witness import witness_thm1, witness_thm2

_DENSITIES = (Fraction(1, 6), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2))

# How many failures to describe in full inside the report.
MAX_FAILURE_DETAIL = 25


@dataclass
class SuiteConfig:
    """Configuration for one suite run; loadable from a JSON file."""

    corpus: Optional[list] = None
    statements: Optional[list[str]] = None
    random_instances_per_statement: int = 500
    seed: int = 1
    order_cap: Optional[int] = None
    output_path: Optional[str] = None
    only: Optional[str] = None
    run_witnesses: bool = True
    source_path: Optional[str] = None

    _KEYS = (
        "corpus",
        "statements",
        "random_instances_per_statement",
        "seed",
        "order_cap",
        "output_path",
    )

    @classmethod
    def from_dict(cls, data: dict, *, source_path: Optional[str] = None) -> "SuiteConfig":
        if not isinstance(data, dict):
            raise SpecParseError("config must be a JSON object")
        unknown = set(data) - set(cls._KEYS)
        if unknown:
            raise SpecParseError(f"unknown config keys: {sorted(unknown)}")
        cfg = cls(source_path=source_path)
        for key in cls._KEYS:
            if key in data and data[key] is not None:
                setattr(cfg, key, data[key])
        if cfg.statements is not None:
            bad = [s for s in cfg.statements if s not in statement_ids()]
            if bad:
                raise SpecParseError(f"unknown statement ids in config: {bad}")
        return cfg

    @classmethod
    def from_file(cls, path) -> "SuiteConfig":
        path = Path(path)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise SpecParseError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise SpecParseError(f"invalid JSON in config {path}: {exc}") from exc
        return cls.from_dict(data, source_path=str(path))


@dataclass
class SuiteReport:
    """Deterministic payload plus wall-clock timing, kept separate."""

    payload: dict
    timing: dict

    @property
    def failures(self) -> int:
        return sum(s["failures"] for s in self.payload["statements"].values())

    def document(self) -> dict:
        doc = dict(self.payload)
        doc["timing"] = self.timing
        return doc


class _Caches:
    """Per-run memoization of the expensive per-group objects."""

    def __init__(self):
        self._normals: dict[int, list[Subset]] = {}
        self._cyclics: dict[int, list[Subset]] = {}
        self._certs: dict[tuple[int, bytes], ApproxCertificate] = {}

    def normals(self, group: Group) -> list[Subset]:
        got = self._normals.get(id(group))
        if got is None:
            got = normal_subgroups(group)
            self._normals[id(group)] = got
        return got

    def cyclics(self, group: Group) -> list[Subset]:
        """Distinct cyclic subgroups, ordered by (size, mask)."""
        got = self._cyclics.get(id(group))
        if got is None:
            seen = {}
            for g in range(group.order):
                sub = subgroup_closure(Subset.singleton(group, g))
                seen.setdefault(sub.mask.tobytes(), sub)
            got = sorted(seen.values(), key=lambda s: (s.size, s.mask.tobytes()))
            self._cyclics[id(group)] = got
        return got

    def cert(self, a: Subset) -> ApproxCertificate:
        key = (id(a.group), a.mask.tobytes())
        got = self._certs.get(key)
        if got is None:
            got = certify(a, "greedy")
            self._certs[key] = got
        return got


def random_symmetric_subset(group: Group, density, stream: SplitMix64) -> Subset:
    """Random inverse-closed subset containing the identity.

    Each {g, g^-1} orbit with g != 1 is included independently with the given
    probability (exact rational), drawn in ascending order of min(g, g^-1),
    so the result depends only on the stream state and the group.
    """
    density = Fraction(density)
    inv = group.inv
    ids = [group.identity]
    for g in range(group.order):
        other = int(inv[g])
        if g == group.identity or g > other:
            continue
        if stream.event(density):
            ids.append(g)
            if other != g:
                ids.append(other)
    return Subset.from_ids(group, ids)


def _random_plain_subset(group: Group, density, stream: SplitMix64) -> Subset:
    density = Fraction(density)
    ids = [g for g in range(group.order) if stream.event(density)]
    if not ids:
        ids = [int(stream.below(group.order))]
    return Subset.from_ids(group, ids)


def _a_candidates(group: Group, roles: dict) -> list[Subset]:
    """Symmetric identity-containing test sets for one corpus group."""
    cands = [Subset.full(group)]
    if group.order > 1:
        cands.append(with_identity(symmetrize(Subset.singleton(group, 1))))
    for role in ("A", "A0", "H"):
        if role in roles:
            cands.append(roles[role])
    deduped = {}
    for cand in cands:
        deduped.setdefault(cand.mask.tobytes(), cand)
    return list(deduped.values())


def _subgroup_pool(group: Group, caches: _Caches) -> list[Subset]:
    pool = {}
    for sub in caches.cyclics(group):
        pool.setdefault(sub.mask.tobytes(), sub)
    for sub in caches.normals(group):
        pool.setdefault(sub.mask.tobytes(), sub)
    full = Subset.full(group)
    pool.setdefault(full.mask.tobytes(), full)
    return sorted(pool.values(), key=lambda s: (s.size, s.mask.tobytes()))


def _corpus_instances(
    sid: str, group: Group, roles: dict, caches: _Caches
) -> Iterator[dict]:
    """Deterministic structured instances of one statement on one group."""
    a_cands = _a_candidates(group, roles)
    full = Subset.full(group)
    if sid in ("P2.1", "P2.2", "C2.3a", "C2.3b"):
        with_k = sid.startswith("C2.3")
        for nsub in caches.normals(group):
            for a in a_cands:
                inst = {"a": a, "nsub": nsub}
                if with_k:
                    inst["k"] = caches.cert(a).k_cert
                yield inst
    elif sid == "Sub-mono":
        pool = _subgroup_pool(group, caches)
        for h2 in pool:
            for h1 in pool:
                if h1.issubset(h2):
                    yield {"h1": h1, "h2": h2}
    elif sid in ("L2.5a", "L2.5b"):
        for a in a_cands:
            for g in range(group.order):
                yield {"a": a, "g": g}
    elif sid == "L2.6":
        for a in a_cands:
            k = caches.cert(a).k_cert
            for g in a.id_list()[:6]:
                for n in (2, 3):
                    yield {"a": a, "g": g, "n": n, "k": k}
    elif sid == "P2.7":
        for a2 in a_cands:
            for a1 in a_cands:
                if a1.issubset(a2):
                    for b in (full, Subset.singleton(group, group.order - 1)):
                        yield {"a1": a1, "a2": a2, "b": b}
    elif sid == "C2.8":
        subs = list(caches.cyclics(group))
        if "H" in roles:
            subs.append(roles["H"])
        k_full = caches.cert(full).k_cert
        for h in subs:
            for b in (full, Subset.singleton(group, group.order - 1)):
                yield {"h": h, "a": full, "b": b, "k": k_full}
    elif sid == "P1.3":
        t_pool = {}
        for t in [caches.cyclics(group)[0], full] + caches.normals(group)[:6]:
            t_pool.setdefault(t.mask.tobytes(), t)
        b_cands = [full] + ([roles["A"]] if "A" in roles else [])
        for a in a_cands:
            for b in b_cands:
                for t in t_pool.values():
                    yield {"a": a, "b": b, "t": t}
    elif sid == "P1.4":
        c_pool = {}
        for c in [caches.cyclics(group)[0], full] + caches.normals(group)[:4]:
            c_pool.setdefault(c.mask.tobytes(), c)
        for a in a_cands:
            k = caches.cert(a).k_cert
            for c in c_pool.values():
                yield {"a": a, "c": c, "k": k}
    else:
        raise KeyError(f"no corpus instance builder for statement {sid!r}")


def _random_instance(
    sid: str, groups: list[tuple[Group, dict]], stream: SplitMix64, caches: _Caches
) -> dict:
    """One random instance of a statement, valid by construction."""
    group, _roles = groups[stream.below(len(groups))]
    density = stream.choice(_DENSITIES)
    if sid in ("P2.1", "P2.2", "C2.3a", "C2.3b"):
        normals = caches.normals(group)
        nsub = normals[stream.below(len(normals))]
        a = random_symmetric_subset(group, density, stream)
        inst = {"a": a, "nsub": nsub}
        if sid.startswith("C2.3"):
            inst["k"] = certify(a, "greedy").k_cert
        return inst
    if sid == "Sub-mono":
        g1 = stream.below(group.order)
        g2 = stream.below(group.order)
        h2 = subgroup_closure(Subset.from_ids(group, sorted({g1, g2})))
        h1 = subgroup_closure(
            Subset.singleton(group, h2.id_list()[stream.below(h2.size)])
        )
        return {"h1": h1, "h2": h2}
    if sid in ("L2.5a", "L2.5b"):
        a = random_symmetric_subset(group, density, stream)
        return {"a": a, "g": stream.below(group.order)}
    if sid == "L2.6":
        a = random_symmetric_subset(group, density, stream)
        return {
            "a": a,
            "g": stream.below(group.order),
            "n": 2 + stream.below(2),
            "k": certify(a, "greedy").k_cert,
        }
    if sid == "P2.7":
        a2 = random_symmetric_subset(group, density, stream)
        keep = [group.identity]
        for g in a2.id_list():
            other = int(group.inv[g])
            if g == group.identity or g > other:
                continue
            if stream.event(Fraction(1, 2)):
                keep.append(g)
                if other != g:
                    keep.append(other)
        a1 = Subset.from_ids(group, sorted(set(keep)))
        b = _random_plain_subset(group, density, stream)
        return {"a1": a1, "a2": a2, "b": b}
    if sid == "C2.8":
        h = subgroup_closure(Subset.singleton(group, stream.below(group.order)))
        extra = random_symmetric_subset(group, density, stream)
        a = h | extra
        return {"h": h, "a": a, "b": _random_plain_subset(group, density, stream),
                "k": certify(a, "greedy").k_cert}
    if sid == "P1.3":
        a = _random_plain_subset(group, density, stream)
        b = _random_plain_subset(group, density, stream)
        t = subgroup_closure(Subset.singleton(group, stream.below(group.order)))
        return {"a": a, "b": b, "t": t}
    if sid == "P1.4":
        a = random_symmetric_subset(group, density, stream)
        c = subgroup_closure(Subset.singleton(group, stream.below(group.order)))
        return {"a": a, "c": c, "k": certify(a, "greedy").k_cert}
    raise KeyError(f"no random instance builder for statement {sid!r}")


def _load_corpus(config: SuiteConfig, cap: int) -> list[tuple[Group, dict]]:
    if config.corpus is None:
        from .corpus import default_corpus

        return [(g, roles) for g, roles in default_corpus() if g.order <= cap]
    loaded = []
    for spec in config.corpus:
        lg = load_group(spec, order_cap=cap)
        loaded.append((lg.group, lg.roles))
    if not loaded:
        raise SpecParseError("config corpus is empty")
    return loaded


def _repro_command(config: SuiteConfig, sid: str, key: str) -> str:
    parts = ["approxcommute", "verify"]
    if config.source_path:
        parts += ["--config", config.source_path]
    parts += ["--seed", str(config.seed), "--statement", sid, "--only", key]
    return " ".join(parts)


def run_suite(config: SuiteConfig) -> SuiteReport:
    """Run the corpus and random passes, then the witness pipelines."""
    t_start = time.perf_counter()
    from .group import current_order_cap

    cap = config.order_cap if config.order_cap is not None else current_order_cap()
    groups = _load_corpus(config, cap)
    sids = list(config.statements) if config.statements else statement_ids()
    caches = _Caches()
    statements_out: dict[str, dict] = {}
    timing_stmt: dict[str, float] = {}

    for sid in sids:
        t_sid = time.perf_counter()
        count = 0
        failures: list[dict] = []
        min_slack: Optional[Fraction] = None
        tightest: Optional[str] = None

        def record(key: str, result: CheckResult) -> None:
            nonlocal count, min_slack, tightest
            count += 1
            if not result.holds:
                if len(failures) < MAX_FAILURE_DETAIL:
                    detail = check_to_dict(result)
                else:
                    detail = {}
                detail["key"] = key
                detail["repro"] = _repro_command(config, sid, key)
                failures.append(detail)
            if min_slack is None or result.slack < min_slack:
                min_slack = result.slack
                tightest = key

        for g_index, (group, roles) in enumerate(groups):
            for i, inst in enumerate(_corpus_instances(sid, group, roles, caches)):
                key = f"{sid}/corpus/{g_index}.{group.name}/{i}"
                if config.only is not None and key != config.only:
                    continue
                record(key, check(sid, description=key, **inst))
        for idx in range(config.random_instances_per_statement):
            key = f"{sid}/rand/{idx}"
            if config.only is not None and key != config.only:
                continue
            stream = SplitMix64(derive_seed(config.seed, sid, idx))
            inst = _random_instance(sid, groups, stream, caches)
            record(key, check(sid, description=key, **inst))

        statements_out[sid] = {
            "instances": count,
            "failures": len(failures),
            "failure_detail": failures[:MAX_FAILURE_DETAIL],
            "min_slack": None if min_slack is None else rational_str(min_slack),
            "tightest_instance": tightest,
        }
        timing_stmt[sid] = time.perf_counter() - t_sid

    witnesses = []
    if config.run_witnesses and config.only is None:
        for g_index, (group, roles) in enumerate(groups):
            full = Subset.full(group)
            w1 = witness_thm1(full)
            w2 = witness_thm2(full)
            witnesses.append(
                {
                    "group": f"{g_index}.{group.name}",
                    "order": group.order,
                    "thm1": witness_to_dict(w1),
                    "thm2": witness_to_dict(w2),
                }
            )

    payload = {
        "schema": SCHEMA_VERSION,
        "config": {
            "seed": config.seed,
            "order_cap": cap,
            "random_instances_per_statement": config.random_instances_per_statement,
            "statements": sids,
            "only": config.only,
            "corpus": [
                {"name": group.name, "order": group.order} for group, _ in groups
            ],
        },
        "statements": statements_out,
        "witnesses": witnesses,
    }
    timing = {
        "total_seconds": time.perf_counter() - t_start,
        "statements": timing_stmt,
    }
    report = SuiteReport(payload=payload, timing=timing)
    if config.output_path:
        from .specio import dump_json

        Path(config.output_path).write_text(dump_json(report.document()))
    return report
