"""Command-line workbench: block decompositions, support tau-tilting
posets, verification pipelines, induction and Mackey checks.

Subcommands: blocks | stt | verify | induce | mackey.  All output is
deterministic byte-for-byte for a fixed configuration; expensive results
are cached on disk keyed by a content hash over (command, configuration,
group data) plus the tool version.  TAUTILT_CACHE overrides the cache
directory; --no-cache disables caching.

Exit codes: 0 success, 2 parse error, 3 cap exceeded, 4 embedding not
normal, 5 verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .algebra import GroupAlgebra, splitting_field_degree
from .engine import (
    PosetCapExceeded,
    TiltingContext,
    enumerate_poset,
    poset_json_bytes,
)
from .ff import FFError, field_create
from .groups import FiniteGroup, GroupError, SubgroupEmbedding, group_from_json
from .modules import ModuleRegistry, module_from_json, module_to_json

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_CAP = 3
EXIT_NOT_NORMAL = 4
EXIT_VERIFY = 5

THEOREM_IDS = ("all", "L3.1", "T3.2", "T3.3", "C3.4", "P3.5", "T3.6")


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class SessionConfig:
    p: int
    m: int | None = None  # None = splitting-field heuristic
    group_order_cap: int = 10000
    poset_node_cap: int = 512
    cache_dir: str | None = None
    seed: int = 20240801

    def resolve_degree(self, groups) -> int:
        if self.m is not None:
            return self.m
        return splitting_field_degree(self.p, groups)

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "group_order_cap": self.group_order_cap,
            "poset_node_cap": self.poset_node_cap,
            "seed": self.seed,
        }


def default_cache_dir() -> str | None:
    env = os.environ.get("TAUTILT_CACHE")
    if env:
        return env
    return str(Path.home() / ".cache" / "tautilt")


class Cache:
    """Content-addressed cache; hits must be byte-identical to fresh runs,
    so entries are invalidated by the tool version."""

    def __init__(self, directory: str | None):
        self.directory = Path(directory) if directory else None

    @staticmethod
    def key(payload: dict) -> str:
        blob = json.dumps(payload, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def load(self, key: str) -> dict | None:
        if self.directory is None:
            return None
        path = self.directory / f"{key}.json"
        if not path.exists():
            return None
        try:
            entry = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        if entry.get("version") != __version__:
            return None
        return entry.get("outputs")

    def store(self, key: str, outputs: dict):
        if self.directory is None:
            return
        self.directory.mkdir(parents=True, exist_ok=True)
        entry = {"version": __version__, "key": key, "outputs": outputs}
        blob = json.dumps(entry, sort_keys=True, separators=(",", ":"))
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(blob)
            os.replace(tmp, self.directory / f"{key}.json")
        except OSError:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _read_json_file(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise CliError(f"cannot read {path}: {e}", EXIT_PARSE) from e
    except json.JSONDecodeError as e:
        raise CliError(f"invalid JSON in {path}: {e}", EXIT_PARSE) from e


def _load_group(path: str, config: SessionConfig) -> tuple[FiniteGroup, dict]:
    data = _read_json_file(path)
    try:
        group = group_from_json(
            data, name=Path(path).stem, order_cap=config.group_order_cap
        )
    except GroupError as e:
        if "cap" in str(e):
            raise CliError(str(e), EXIT_CAP) from e
        raise CliError(f"bad group file {path}: {e}", EXIT_PARSE) from e
    return group, data


def _session_algebra(group: FiniteGroup, config: SessionConfig, groups=None) -> GroupAlgebra:
    degree = config.resolve_degree(groups or [group])
    field = field_create(config.p, degree)
    algebra = GroupAlgebra(group, field)
    ModuleRegistry(algebra, seed=config.seed)
    return algebra


def _atomic_write(path: str, data: bytes):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _field_json(field) -> dict:
    return {"p": field.p, "m": field.m, "modulus": list(field.modulus)}


# -- commands ----------------------------------------------------------------------


def cmd_blocks(args, config: SessionConfig) -> int:
    group, group_data = _load_group(args.group, config)
    cache = Cache(config.cache_dir)
    key = cache.key(
        {"cmd": "blocks", "config": config.to_json(), "group": group_data}
    )
    outputs = cache.load(key)
    if outputs is None:
        algebra = _session_algebra(group, config)
        blocks = algebra.blocks()
        payload = {
            "group": group.name,
            "order": group.order,
            "field": _field_json(algebra.field),
            "count": len(blocks),
            "blocks": [
                {
                    "index": b.index,
                    "dim": b.dim,
                    "principal": b.is_principal,
                    "idempotent_support": [
                        i for i, c in enumerate(b.idempotent) if c
                    ],
                }
                for b in blocks
            ],
        }
        outputs = {
            "stdout": json.dumps(payload, sort_keys=True, separators=(",", ":"))
            + "\n"
        }
        cache.store(key, outputs)
    sys.stdout.write(outputs["stdout"])
    return EXIT_OK


def cmd_stt(args, config: SessionConfig) -> int:
    group, group_data = _load_group(args.group, config)
    cache = Cache(config.cache_dir)
    key = cache.key(
        {
            "cmd": "stt",
            "config": config.to_json(),
            "group": group_data,
            "block": args.block,
        }
    )
    outputs = cache.load(key)
    if outputs is None:
        algebra = _session_algebra(group, config)
        block = None
        if args.block is not None:
            blocks = algebra.blocks()
            if not 0 <= args.block < len(blocks):
                raise CliError(
                    f"block index {args.block} out of range ({len(blocks)} blocks)",
                    EXIT_PARSE,
                )
            block = blocks[args.block]
        ctx = TiltingContext(algebra, block)
        try:
            poset = enumerate_poset(ctx, node_cap=config.poset_node_cap)
        except PosetCapExceeded as e:
            raise CliError(f"{e} (no partial files written)", EXIT_CAP) from e
        edge_word = "edge" if poset.n_edges == 1 else "edges"
        outputs = {
            "stdout": f"{poset.n_nodes} nodes, {poset.n_edges} {edge_word}\n",
            "json": poset_json_bytes(poset).decode(),
            "dot": poset.to_dot(),
        }
        cache.store(key, outputs)
    if args.json:
        _atomic_write(args.json, outputs["json"].encode())
    if args.dot:
        _atomic_write(args.dot, outputs["dot"].encode())
    sys.stdout.write(outputs["stdout"])
    return EXIT_OK


def _embedding_or_die(sub: FiniteGroup, amb: FiniteGroup, need_normal: bool) -> SubgroupEmbedding:
    try:
        emb = SubgroupEmbedding(sub, amb)
    except GroupError as e:
        raise CliError(f"not an embedded subgroup: {e}", EXIT_NOT_NORMAL) from e
    if need_normal and not emb.normal:
        raise CliError("the subgroup is not normal in the ambient group", EXIT_NOT_NORMAL)
    return emb


def cmd_verify(args, config: SessionConfig) -> int:
    from .algebra import inertial_group
    from .functors import (
        InductionContext,
        verify_main_theorems,
        verify_syzygy_commutation,
    )

    sub, sub_data = _load_group(args.sub, config)
    amb, amb_data = _load_group(args.amb, config)
    emb = _embedding_or_die(sub, amb, need_normal=True)
    wanted = set(args.theorems)
    if "all" in wanted:
        wanted = set(THEOREM_IDS[1:])
    cache = Cache(config.cache_dir)
    key = cache.key(
        {
            "cmd": "verify",
            "config": config.to_json(),
            "sub": sub_data,
            "amb": amb_data,
            "theorems": sorted(wanted),
        }
    )
    outputs = cache.load(key)
    if outputs is None:
        degree = config.resolve_degree([amb])
        field = field_create(config.p, degree)
        sub_alg = GroupAlgebra(sub, field)
        amb_alg = GroupAlgebra(amb, field)
        ModuleRegistry(sub_alg, seed=config.seed)
        ModuleRegistry(amb_alg, seed=config.seed)
        ictx = InductionContext(emb, sub_alg, amb_alg)
        amb_ctx = TiltingContext(amb_alg)
        try:
            amb_poset = enumerate_poset(amb_ctx, node_cap=config.poset_node_cap)
        except PosetCapExceeded as e:
            raise CliError(str(e), EXIT_CAP) from e
        block_reports = []
        overall = True
        clause_map = {
            "T3.2": {"inductions_certify"},
            "T3.3": {"covering_block_components_certify"},
            "C3.4": {"order_preserved_and_reflected"},
            "T3.6": {"order_preserved_and_reflected", "induced_map_injective"},
            "P3.5": {"descent_matches"},
        }
        for block in sub_alg.blocks():
            ctx = TiltingContext(sub_alg, block)
            try:
                poset = enumerate_poset(ctx, node_cap=config.poset_node_cap)
            except PosetCapExceeded as e:
                raise CliError(str(e), EXIT_CAP) from e
            inert = inertial_group(block, emb)
            entry = {
                "block": block.index,
                "block_dim": block.dim,
                "inertial_order": inert.order,
                "poset": {"nodes": poset.n_nodes, "edges": poset.n_edges},
            }
            main = verify_main_theorems(ictx, block, poset, amb_ctx, amb_poset)
            selected = set()
            for tid in wanted & clause_map.keys():
                selected |= clause_map[tid]
            if selected:
                informational = {"invariant_nodes_found", "induced_map_image"}
                clauses = [
                    c
                    for c in main.clauses
                    if c.name in selected or c.name in informational
                ]
                entry["pipeline"] = {
                    "clauses": [c.to_json() for c in clauses],
                    "passed": all(c.passed for c in clauses),
                }
                overall = overall and entry["pipeline"]["passed"]
            if "L3.1" in wanted:
                l31 = []
                for node in main.invariant_nodes:
                    rep = verify_syzygy_commutation(ictx, node.module())
                    slim = rep.to_json()
                    for c in slim["clauses"]:
                        c["details"].pop("witness", None)
                        c["details"].pop("witnesses", None)
                    l31.append(slim)
                    overall = overall and rep.passed
                entry["L3.1"] = {
                    "reports": l31,
                    "passed": all(r["passed"] for r in l31),
                }
            block_reports.append(entry)
        payload = {
            "sub": sub.name,
            "amb": amb.name,
            "field": _field_json(field),
            "normal": True,
            "index": emb.n_cosets,
            "coset_reps": [list(amb.elements[r]) for r in emb.coset_reps],
            "theorems": sorted(wanted),
            "blocks": block_reports,
            "passed": overall,
        }
        outputs = {
            "stdout": json.dumps(payload, sort_keys=True, separators=(",", ":"))
            + "\n",
            "passed": overall,
        }
        cache.store(key, outputs)
    sys.stdout.write(outputs["stdout"])
    return EXIT_OK if outputs["passed"] else EXIT_VERIFY


def cmd_induce(args, config: SessionConfig) -> int:
    from .functors import InductionContext, induce

    sub, _ = _load_group(args.sub, config)
    amb, _ = _load_group(args.amb, config)
    emb = _embedding_or_die(sub, amb, need_normal=False)
    module_data = _read_json_file(args.module)
    degree = config.resolve_degree([amb])
    field = field_create(config.p, degree)
    sub_alg = GroupAlgebra(sub, field)
    amb_alg = GroupAlgebra(amb, field)
    ModuleRegistry(sub_alg, seed=config.seed)
    ModuleRegistry(amb_alg, seed=config.seed)
    try:
        M = module_from_json(module_data, algebra=sub_alg)
    except Exception as e:
        raise CliError(f"bad module file {args.module}: {e}", EXIT_PARSE) from e
    ind = induce(InductionContext(emb, sub_alg, amb_alg, require_normal=False), M)
    blob = (
        json.dumps(module_to_json(ind), sort_keys=True, separators=(",", ":")) + "\n"
    )
    if args.out:
        _atomic_write(args.out, blob.encode())
    else:
        sys.stdout.write(blob)
    return EXIT_OK


def cmd_mackey(args, config: SessionConfig) -> int:
    from .functors import InductionContext, mackey_decomposition

    sub, _ = _load_group(args.sub, config)
    amb, _ = _load_group(args.amb, config)
    emb = _embedding_or_die(sub, amb, need_normal=True)
    module_data = _read_json_file(args.module)
    degree = config.resolve_degree([amb])
    field = field_create(config.p, degree)
    sub_alg = GroupAlgebra(sub, field)
    amb_alg = GroupAlgebra(amb, field)
    ModuleRegistry(sub_alg, seed=config.seed)
    ModuleRegistry(amb_alg, seed=config.seed)
    try:
        M = module_from_json(module_data, algebra=sub_alg)
    except Exception as e:
        raise CliError(f"bad module file {args.module}: {e}", EXIT_PARSE) from e
    witness = mackey_decomposition(
        InductionContext(emb, sub_alg, amb_alg), M
    )
    payload = witness.to_json()
    payload["module_dim"] = M.dim
    payload["index"] = emb.n_cosets
    sys.stdout.write(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"
    )
    return EXIT_OK if witness.ok else EXIT_VERIFY


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tautilt",
        description="group-algebra block and support tau-tilting workbench",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--p", type=int, required=True, help="field characteristic")
        p.add_argument(
            "--m",
            type=int,
            default=None,
            help="field degree (default: splitting-field heuristic)",
        )
        p.add_argument("--order-cap", type=int, default=10000)
        p.add_argument("--node-cap", type=int, default=512)
        p.add_argument("--seed", type=int, default=20240801)
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--no-cache", action="store_true")

    b = sub.add_parser("blocks", help="block decomposition of a group algebra")
    b.add_argument("group")
    common(b)

    s = sub.add_parser("stt", help="enumerate the support tau-tilting poset")
    s.add_argument("group")
    s.add_argument("--block", type=int, default=None, help="restrict to one block")
    s.add_argument("--dot", default=None, help="write the Hasse diagram as DOT")
    s.add_argument("--json", default=None, help="write the poset as JSON")
    common(s)

    v = sub.add_parser("verify", help="run the invariance/induction pipelines")
    v.add_argument("sub")
    v.add_argument("amb")
    v.add_argument(
        "--theorems",
        nargs="+",
        choices=list(THEOREM_IDS),
        default=["all"],
        help="which checks to run",
    )
    common(v)

    i = sub.add_parser("induce", help="induce a module along an embedding")
    i.add_argument("sub")
    i.add_argument("amb")
    i.add_argument("--module", required=True)
    i.add_argument("--out", default=None)
    common(i)

    m = sub.add_parser("mackey", help="verify the restriction of an induction")
    m.add_argument("sub")
    m.add_argument("amb")
    m.add_argument("--module", required=True)
    common(m)
    return parser


def config_from_args(args) -> SessionConfig:
    cache_dir = None if args.no_cache else (args.cache_dir or default_cache_dir())
    return SessionConfig(
        p=args.p,
        m=args.m,
        group_order_cap=args.order_cap,
        poset_node_cap=args.node_cap,
        cache_dir=cache_dir,
        seed=args.seed,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = config_from_args(args)
    handlers = {
        "blocks": cmd_blocks,
        "stt": cmd_stt,
        "verify": cmd_verify,
        "induce": cmd_induce,
        "mackey": cmd_mackey,
    }
    try:
        return handlers[args.command](args, config)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except FFError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
