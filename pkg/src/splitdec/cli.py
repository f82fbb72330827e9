"""Command-line entry point: ``drg info | verify | dump``.

``info``
    prints the basic invariants of a graph: order, diameter,
    intersection array, eigenvalues, multiplicities, Q-polynomial
    orderings, self-duality, and the classical-parameter detection
    outcome.
``verify``
    runs the requested verification suites (``scheme``, ``split``,
    ``qtet``, ``tmodule``) in dependency order, assembles a JSON report,
    and exits 0 iff every executed check passed.
``dump``
    writes the scheme and split-decomposition matrices as text files
    next to a report that references them by relative path.

Exit codes: 0 all checks pass; 1 verification failure; 2 inapplicable
or invalid configuration; 3 internal error.
"""

from __future__ import annotations

import argparse
import sys
import time
import traceback
from dataclasses import dataclass
from pathlib import Path

from . import cache as cachelib
from .errors import (
    CacheCorrupt,
    ConfigError,
    DegenerateParameters,
    Disconnected,
    LoopOrMultiEdge,
    NotClassical,
    NotDistanceRegular,
    ParseError,
    SplitdecError,
    SuiteInapplicable,
    UnsupportedFieldOrder,
)
from .field import GroundField
from .graphs import distance_data, graph_from_spec, intersection_numbers
from .qtet import (
    DEFAULT_PROBE,
    Probe,
    build_qtet_system,
    detect_classical,
    parse_probe,
    verify_qtet_suite,
)
from .report import (
    all_executed_pass,
    build_report,
    summarize,
    write_report,
)
from .scheme import (
    dual_data,
    required_field_b,
    scheme_data,
    verify_scheme_suite,
)
from .split import GRID_LABELS, split_decomposition, verify_split_suite
from .tmodules import decompose, module_inventory, verify_tmodule_suite

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_INTERNAL = 3

SUITE_NAMES = ("scheme", "split", "qtet", "tmodule")

EXACT_LIMIT = 64  # default backend switches to f64 above this order

_CONFIG_ERRORS = (
    ConfigError,
    SuiteInapplicable,
    ParseError,
    Disconnected,
    LoopOrMultiEdge,
    NotDistanceRegular,
    UnsupportedFieldOrder,
    DegenerateParameters,
)


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass
class RunConfig:
    """Validated run configuration shared by all subcommands."""

    graph: str
    base_vertex: int = 0
    backend: str | None = None  # None = auto (exact for n <= 64)
    tol: float = 1e-8
    qsign: int = 1
    probe: Probe = DEFAULT_PROBE
    ordering: object = "auto"
    suites: tuple | None = None
    out: str | None = None
    cache_dir: str | None = None

    def __post_init__(self):
        if not isinstance(self.graph, str) or ":" not in self.graph:
            raise ConfigError(
                f"graph spec {self.graph!r} must look like family:params "
                "or file:path"
            )
        if self.base_vertex < 0:
            raise ConfigError(f"base vertex {self.base_vertex} is negative")
        if self.backend not in (None, "exact", "f64"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if not self.tol > 0:
            raise ConfigError(f"tolerance must be positive, got {self.tol}")
        if self.qsign not in (1, -1):
            raise ConfigError(f"qsign must be +1 or -1, got {self.qsign}")
        if self.probe.count < 1:
            raise ConfigError("probe count must be at least 1")
        if self.suites is not None:
            bad = [s for s in self.suites if s not in SUITE_NAMES]
            if bad:
                raise ConfigError(
                    f"unknown suites {bad}; choose from {list(SUITE_NAMES)}"
                )
            if not self.suites:
                raise ConfigError("empty suite list")
        if self.ordering != "auto":
            o = tuple(int(v) for v in self.ordering)
            if not o or o[0] != 0 or sorted(o) != list(range(len(o))):
                raise ConfigError(
                    f"ordering {list(o)} must be a permutation of 0..D "
                    "fixing 0"
                )
            object.__setattr__(self, "ordering", o)

    def echo(self) -> dict:
        """Config echo for report metadata (deterministic)."""
        return {
            "graph": self.graph,
            "base_vertex": self.base_vertex,
            "backend": self.backend or "auto",
            "tol": self.tol,
            "qsign": self.qsign,
            "probe": f"{self.probe.kind}:{self.probe.count}:{self.probe.seed}"
                     if self.probe.kind == "sample" else "full",
            "ordering": "auto" if self.ordering == "auto"
                        else list(self.ordering),
            "suites": list(self.suites) if self.suites is not None else "auto",
        }


def _parse_qsign(text: str) -> int:
    if text in ("+", "+1", "1"):
        return 1
    if text in ("-", "-1"):
        return -1
    raise ConfigError(f"qsign must be '+' or '-', got {text!r}")


def _parse_ordering(text: str):
    if text == "auto":
        return "auto"
    try:
        return tuple(int(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"ordering {text!r} is not a comma list of "
                          "integers") from None


def _parse_suites(text: str | None):
    if text is None:
        return None
    return tuple(s.strip() for s in text.split(",") if s.strip())


def config_from_args(ns) -> RunConfig:
    return RunConfig(
        graph=ns.graph,
        base_vertex=ns.base_vertex,
        backend=ns.backend,
        tol=ns.tol,
        qsign=_parse_qsign(ns.qsign),
        probe=parse_probe(ns.probe),
        ordering=_parse_ordering(ns.ordering),
        suites=_parse_suites(ns.suites),
        out=ns.out,
        cache_dir=ns.cache_dir,
    )


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------


class Pipeline:
    """Lazily builds graph -> scheme -> dual -> split, with caching."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.timings = {}
        self.cache = cachelib.Cache(config.cache_dir)
        t0 = time.perf_counter()
        self.graph = graph_from_spec(config.graph)
        self.dd = distance_data(self.graph)
        self.inter = intersection_numbers(self.graph, self.dd)
        self.timings["graph"] = round(time.perf_counter() - t0, 3)
        if config.ordering != "auto" and \
                len(config.ordering) != self.dd.D + 1:
            raise ConfigError(
                f"ordering has {len(config.ordering)} entries; the graph "
                f"has diameter {self.dd.D}"
            )
        t0 = time.perf_counter()
        self.classical = None
        self.classical_note = ""
        try:
            self.classical = detect_classical(self.inter, config.qsign)
            b = self.classical.b
            self.classical_note = (
                f"classical with (D, b, alpha, beta) = "
                f"({self.classical.D}, {b}, {self.classical.alpha}, "
                f"{self.classical.beta})"
            )
        except NotClassical as exc:
            # covers the b = 1 case as a subclass
            self.classical_note = f"not classical with alpha = b - 1: {exc}"
            b = required_field_b(self.inter)
        self.field = GroundField(b, config.qsign)
        self.backend = config.backend or (
            "exact" if self.graph.n <= EXACT_LIMIT else "f64"
        )
        self.scheme = scheme_data(self.graph, self.dd, self.inter,
                                  self.field, ordering=config.ordering)
        self.dual = dual_data(self.scheme, config.base_vertex)
        self.timings["scheme"] = round(time.perf_counter() - t0, 3)
        self._split = None
        self._qtet = None
        self.modules = None

    # -- suite resolution ----------------------------------------------------

    @property
    def qtet_applicable(self) -> bool:
        return self.classical is not None and abs(self.classical.b) > 1

    def resolve_suites(self) -> tuple:
        req = self.config.suites
        if req is None:
            names = ["scheme", "split", "tmodule"]
            if self.qtet_applicable:
                names.append("qtet")
        else:
            names = list(req)
            if "qtet" in names and not self.qtet_applicable:
                raise SuiteInapplicable(
                    "the q-tetrahedron suite needs classical parameters "
                    f"with |b| > 1; graph {self.config.graph!r} is "
                    f"{self.classical_note}"
                )
        return tuple(s for s in SUITE_NAMES if s in names)

    # -- artifacts -----------------------------------------------------------

    def _split_cache_key(self):
        return cachelib.split_key(
            self.config.graph, self.config.base_vertex,
            self.scheme.ordering, self.backend,
            cachelib.scheme_fingerprint(self.scheme),
        )

    def split_system(self):
        if self._split is not None:
            return self._split
        t0 = time.perf_counter()
        loaded = False
        if self.cache.enabled:
            key = self._split_cache_key()
            try:
                payload = self.cache.load(key)
                if payload is not None:
                    self._split = cachelib.split_from_payload(
                        self.scheme, self.dual, payload
                    )
                    loaded = True
            except CacheCorrupt:
                self._split = None
        if self._split is None:
            self._split = split_decomposition(self.scheme, self.dual)
            if self.cache.enabled:
                self.cache.store(self._split_cache_key(),
                                 cachelib.split_payload(self._split))
        tag = "split_load" if loaded else "split_build"
        self.timings[tag] = round(time.perf_counter() - t0, 3)
        return self._split

    def qtet_system(self):
        if self._qtet is not None:
            return self._qtet
        if not self.qtet_applicable:
            raise SuiteInapplicable(
                f"graph {self.config.graph!r} is {self.classical_note}"
            )
        split = self.split_system()
        t0 = time.perf_counter()
        self._qtet = build_qtet_system(self.scheme, self.dual, split,
                                       self.classical)
        if self.cache.enabled:
            key = cachelib.qtet_key(
                self.config.graph, self.config.base_vertex,
                self.scheme.ordering, self.backend,
                cachelib.scheme_fingerprint(self.scheme),
                self.config.qsign,
            )
            self.cache.store(key, cachelib.qtet_payload(self._qtet))
        self.timings["qtet_build"] = round(time.perf_counter() - t0, 3)
        return self._qtet

    # -- suite runners -------------------------------------------------------

    def run_suite(self, name: str) -> list:
        t0 = time.perf_counter()
        if name == "scheme":
            checks = verify_scheme_suite(self.scheme, self.dual)
        elif name == "split":
            checks = verify_split_suite(self.split_system())
        elif name == "qtet":
            checks = verify_qtet_suite(self.qtet_system(),
                                       probe=self.config.probe,
                                       tol=self.config.tol)
        elif name == "tmodule":
            checks = self._tmodule_checks()
        else:
            raise ConfigError(f"unknown suite {name!r}")
        self.timings[f"suite_{name}"] = round(time.perf_counter() - t0, 3)
        for c in checks:
            c["suite"] = name
        return checks

    def _tmodule_checks(self) -> list:
        self.modules = decompose(self.scheme, self.dual,
                                 backend=self.backend, tol=self.config.tol)
        if self.backend == "exact":
            return verify_tmodule_suite(self.scheme, self.dual,
                                        self.split_system(), self.modules)
        import numpy as np

        checks = []
        total = sum(w.dim for w in self.modules)
        checks.append({
            "name": "tmodule_dimensions_sum",
            "paper_anchor": "module dimensions sum to |X|",
            "status": "pass" if total == self.scheme.n else "fail",
            "max_residual": "0",
            "mode": "float-certified",
            "witness": None if total == self.scheme.n
            else {"total": total, "n": self.scheme.n},
        })
        B = np.hstack([w.basis for w in self.modules])
        gram = B.conj().T @ B
        resid = float(np.abs(gram - np.eye(B.shape[1])).max())
        checks.append({
            "name": "tmodule_orthonormal_bases",
            "paper_anchor": "modules are pairwise orthogonal",
            "status": "pass" if resid <= 100 * self.config.tol else "fail",
            "max_residual": f"{resid:.3e}",
            "mode": "float-certified",
        })
        checks.append({
            "name": "tmodule_exact_suite",
            "paper_anchor": "cell containments and closure certificates "
                            "(exact backend only)",
            "status": "skipped",
            "max_residual": "0",
            "mode": "float-certified",
        })
        for c in checks:
            if c.get("witness", False) is None:
                del c["witness"]
        return checks

    # -- tables / metadata ---------------------------------------------------

    def tables(self) -> dict:
        t = {
            "intersection_array": [
                [int(v) for v in self.inter.array[0]],
                [int(v) for v in self.inter.array[1]],
            ],
            "eigenvalues": [s.encode() for s in self.scheme.theta],
            "multiplicities": list(self.scheme.m),
            "qpoly_orderings": [list(o) for o in self.scheme.orderings],
            "self_dual": self.scheme.self_dual,
            "classical": self.classical.describe() if self.classical
            else self.classical_note,
        }
        if self._split is not None:
            t["tilde_dims"] = {
                label: self._split.grid(label).dims()
                for label in GRID_LABELS
            }
        if self.modules is not None:
            t["module_inventory"] = module_inventory(self.modules)
        return t

    def metadata(self) -> dict:
        return {
            "graph": self.config.graph,
            "parameters": {
                "n": self.graph.n,
                "D": self.dd.D,
                "b": self.field.b,
                "qsign": self.field.qsign,
                "backend": self.backend,
                "base_vertex": self.config.base_vertex,
                "ordering": list(self.scheme.ordering),
            },
            "timings": dict(self.timings),
            "config": self.config.echo(),
        }


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def _array_text(inter) -> str:
    bs, cs = inter.array
    return "{" + ",".join(str(v) for v in bs) + ";" + \
        ",".join(str(v) for v in cs) + "}"


def cmd_info(config: RunConfig) -> int:
    pipe = Pipeline(config)
    sch = pipe.scheme
    lines = [
        f"graph {config.graph}: n={pipe.graph.n} D={pipe.dd.D}",
        f"intersection array {_array_text(pipe.inter)}",
        "eigenvalues " + ", ".join(s.encode() for s in sch.theta),
        "multiplicities " + ", ".join(str(m) for m in sch.m),
        "Q-polynomial orderings " + "; ".join(
            ",".join(str(v) for v in o) for o in sch.orderings),
        f"chosen ordering {','.join(str(v) for v in sch.ordering)}",
        f"formally self-dual: {'yes' if sch.self_dual else 'no'}",
        f"classical parameters: {pipe.classical_note}",
    ]
    print("\n".join(lines))
    if config.out:
        report = build_report(pipe.metadata(), [], pipe.tables())
        write_report(report, config.out)
        print(f"report written to {config.out}")
    return EXIT_PASS


def run_verify(config: RunConfig):
    """Verify pipeline; returns (report, exit_code)."""
    pipe = Pipeline(config)
    suites = pipe.resolve_suites()
    checks = []
    for name in suites:
        entries = pipe.run_suite(name)
        fails = sum(1 for c in entries if c["status"] == "fail")
        print(f"suite {name}: {len(entries)} checks, {fails} failed")
        checks.extend(entries)
    meta = pipe.metadata()
    meta["suites_run"] = list(suites)
    report = build_report(meta, checks, pipe.tables())
    return report, (EXIT_PASS if all_executed_pass(report) else EXIT_FAIL)


def cmd_verify(config: RunConfig) -> int:
    report, code = run_verify(config)
    if config.out:
        write_report(report, config.out)
        print(f"report written to {config.out}")
    s = summarize(report)
    verdict = "PASS" if code == EXIT_PASS else "FAIL"
    print(f"RESULT {verdict} ({s['counts']['pass']} passed, "
          f"{s['counts']['fail']} failed, {s['counts']['skipped']} skipped)")
    if s["failures"]:
        print("failing checks: " + ", ".join(s["failures"]))
    return code


def cmd_dump(config: RunConfig) -> int:
    if not config.out:
        raise ConfigError("dump needs --out DIRECTORY")
    outdir = Path(config.out)
    outdir.mkdir(parents=True, exist_ok=True)
    pipe = Pipeline(config)
    artifacts = {}

    def put(name: str, text: str):
        (outdir / name).write_text(text, encoding="ascii")
        artifacts[name.rsplit(".", 1)[0]] = name

    from .matrix import Mat
    put("A1.txt", Mat.from_int_array(pipe.field, pipe.dd.A[1]).encode())
    split = pipe.split_system()
    for label in GRID_LABELS:
        g = split.grid(label)
        put(f"{label}_C.txt", g.C.encode())
        put(f"{label}_Cinv.txt", g.Cinv.encode())
    if pipe.qtet_applicable and pipe.graph.n <= EXACT_LIMIT:
        sysq = pipe.qtet_system()
        for name in ("A", "Astar", "B", "Bstar", "K", "Kstar", "Phi", "Psi"):
            put(f"{name}.txt", getattr(sysq, name).encode())
    tables = pipe.tables()
    tables["artifacts"] = artifacts
    report = build_report(pipe.metadata(), [], tables)
    write_report(report, outdir / "report.json")
    print(f"wrote {len(artifacts)} matrix dumps and report.json to {outdir}")
    return EXIT_PASS


# ---------------------------------------------------------------------------
# argument parsing and entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", required=True,
                        help="family:params (hamming:D,n | johnson:n,d | "
                             "cycle:n | bilinear:d,e,r | hermitian:d,r) "
                             "or file:PATH")
    common.add_argument("--base-vertex", type=int, default=0)
    common.add_argument("--backend", choices=("exact", "f64"), default=None)
    common.add_argument("--tol", type=float, default=1e-8)
    common.add_argument("--qsign", default="+")
    common.add_argument("--probe", default="sample:32:42",
                        help="full or sample:COUNT:SEED")
    common.add_argument("--ordering", default="auto",
                        help="auto or a comma list like 0,3,1,2")
    common.add_argument("--suites", default=None,
                        help="comma subset of scheme,split,qtet,tmodule")
    common.add_argument("--out", default=None)
    common.add_argument("--cache-dir", default=None,
                        help=f"cache root (default ${cachelib.ENV_CACHE_DIR})")

    ap = argparse.ArgumentParser(
        prog="drg",
        description="Exact split-decomposition and q-tetrahedron "
                    "verification for Q-polynomial distance-regular graphs",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("info", parents=[common],
                   help="print graph and scheme invariants")
    sub.add_parser("verify", parents=[common],
                   help="run verification suites and emit a JSON report")
    sub.add_parser("dump", parents=[common],
                   help="write matrix dumps plus a report to --out")
    return ap


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        config = config_from_args(ns)
        if ns.command == "info":
            return cmd_info(config)
        if ns.command == "verify":
            return cmd_verify(config)
        if ns.command == "dump":
            return cmd_dump(config)
        raise ConfigError(f"unknown command {ns.command!r}")
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SplitdecError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception:
        traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
