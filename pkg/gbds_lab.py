"""
gbds-lab - command-line laboratory for finite Boolean dynamical systems
"""
import argparse
import json
import os
import random
import sys
from pathlib import Path

from dotenv import load_dotenv

from core.coefficients import parse_ring
from core.constructions.desingularization import b_letter
from core.constructions import (
    admissible_pairs,
    desingularize,
    tilde_system,
)
from core.errors import GbdsError
from core.inverse_semigroup import FreeGroupWord, enumerate_elements, fiber, grade_buckets
from core.skew_algebra import SystemAlgebra, render_monomial
from core.stone_dual import labelled_to_gbds, stone_graph
from modules.expression import parse_expression
from modules.graph_export import export_graphml, lattice_to_dot, space_to_dot, space_to_networkx
from modules.reports import Report, export_report_json
from modules.system_document import (
    parse_labelled_space,
    parse_system,
    serialize_system,
    write_labelled_space,
    write_system,
)
from modules.verification import (
    VerificationSettings,
    algebra_checks,
    desingularization_checks,
    ideal_checks,
    random_system_checks,
    semigroup_checks,
    stone_checks,
    system_checks,
    tilde_checks,
)
from src.utils import configure_logger, load_config, resolve_seed

COMMANDS = ("validate", "info", "semigroup", "algebra", "tilde", "ideals",
            "desingularize", "stone", "from-labelled", "verify")

DEFAULT_CONFIG = Path(__file__).resolve().parent / "config" / "config.yaml"

SHOWN_ELEMENTS = 200


class LabArgumentParser(argparse.ArgumentParser):
    """Raises GbdsError on usage errors."""

    def error(self, message):
        raise GbdsError(f"{self.prog}: {message}")


def build_parser(config):
    cli = config.get("cli", {})
    parser = LabArgumentParser(prog="gbds-lab", description="Finite relative generalized Boolean dynamical systems")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--system", help="JSON system document (a labelled space for from-labelled)")
    parser.add_argument("--bound", type=int, default=cli.get("default_bound", 6), help="|alpha| + |beta| bound")
    parser.add_argument("--format", dest="fmt", choices=("text", "json", "dot", "graphml"), default=cli.get("default_format", "text"))
    parser.add_argument("--ring", default=cli.get("default_ring", "int"), help="int or mod:m")
    parser.add_argument("--expr", help="algebra expression, e.g. \"S{a,[v2]}*s{a,[v2]}\"")
    parser.add_argument("--grade", help="free-group grade for the semigroup fiber, e.g. ab^-1")
    parser.add_argument("--seed", type=int, help="seed for randomized checks (default: GBDS_LAB_SEED)")
    parser.add_argument("--random", type=int, metavar="N", help="also verify N seeded random systems")
    parser.add_argument("--output", help="file to write: the from-labelled system, the stone space "
                                         "(JSON, or GraphML with --format graphml) or the verify report")
    parser.add_argument("--config", help="YAML configuration (default: GBDS_LAB_CONFIG or config/config.yaml)")
    return parser


def _config_path(argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    return known.config or os.getenv("GBDS_LAB_CONFIG") or str(DEFAULT_CONFIG)


def _require_system(args):
    if not args.system:
        raise GbdsError(f"{args.command} needs --system PATH")
    return parse_system(args.system)


# === commands ===

def cmd_validate(args, config, report):
    system = _require_system(args)
    report.add("system", system.summary())


def cmd_info(args, config, report):
    system = _require_system(args)
    report.add("system", system.summary())
    report.add("atoms", [
        {
            "atom": system.format(atom),
            "delta": "".join(sorted(system.delta(atom))) or "∅",
            "class": system.classify(atom).kind,
            "in_J": bool(atom & system.relative_ideal.top),
        }
        for atom in system.algebra.atoms
    ])
    limit = config["verification"]["member_limit"]
    report.add("members", [system.format(m) for m in system.algebra.members[:limit]])


def cmd_semigroup(args, config, report, settings, seed):
    system = _require_system(args)
    elements = enumerate_elements(system, args.bound, member_limit=settings.member_limit)
    report.add("bound", args.bound)
    report.add("elements", len(elements))
    report.add("idempotents", sum(1 for s in elements if s.is_idempotent))
    report.add("grades", [
        {"grade": str(g), "elements": len(bucket)} for g, bucket in grade_buckets(elements).items()
    ])
    if args.grade:
        g = FreeGroupWord.parse(args.grade, system.alphabet)
        report.add(f"fiber {g}", [s.render(system) for s in fiber(system, g, args.bound)])
    else:
        report.add("listing", [s.render(system) for s in elements[:SHOWN_ELEMENTS]])
    report.checks.extend(semigroup_checks(system, args.bound, settings.member_limit,
                                          settings.max_tuples, random.Random(seed)))


def cmd_algebra(args, config, report, settings, seed):
    system = _require_system(args)
    algebra = SystemAlgebra(system, parse_ring(args.ring))
    report.add("ring", str(algebra.ring))
    if args.expr:
        value = parse_expression(algebra, args.expr)
        report.add("expression", args.expr)
        report.add("normal_form", value.render())
        report.add("z_components", {d: part.render() for d, part in algebra.z_components(value).items()})
        if algebra.basis_conditional:
            report.add("note", "normal form relative to the collapse basis on J")
        return value.render()
    basis = algebra.basis_monomials(min(args.bound, 4))
    report.add("basis_monomials", [render_monomial(system, m) for m in basis[:SHOWN_ELEMENTS]])
    report.add("forbidden_monomials", len(algebra.forbidden_monomials(min(args.bound, 4))))
    report.checks.extend(algebra_checks(system, algebra.ring, settings, random.Random(seed)))
    return None


def cmd_tilde(args, config, report):
    system = _require_system(args)
    tilde = tilde_system(system)
    carrier = tilde.system.algebra
    report.add("members", len(carrier.members))
    report.add("atoms", [tilde.format(a) for a in carrier.atoms])
    report.add("regular", [tilde.format(m) for m in tilde.system.regular_sets.members])
    report.add("ideals", {a: tilde.format(tilde.system.ideals[a].top) for a in tilde.system.alphabet})
    report.checks.extend(tilde_checks(system, parse_ring(args.ring)))
    return tilde


def cmd_ideals(args, config, report):
    system = _require_system(args)
    lattice = admissible_pairs(system)
    report.add("pairs", lattice.table())
    report.add("meets_componentwise", lattice.meets_are_componentwise)
    report.checks.extend(ideal_checks(system, parse_ring(args.ring)))
    return lattice


def cmd_desingularize(args, config, report, settings):
    system = _require_system(args)
    desing = desingularize(system)
    report.add("x_chain", [system.format(x.top) for x in desing.x_chain])
    report.add("stabilization_index", desing.stabilization_index)
    max_level = desing.n + settings.extra_levels
    report.add("certificates", [
        {"level": c.level, "class": desing.format_class(c.level, c.rep), "letter": c.letter or "-"}
        for c in desing.certificates(max_level)
    ])
    report.add("letters", list(system.alphabet) + [b_letter(i) for i in range(1, desing.n + 2)])
    report.checks.extend(desingularization_checks(system, settings))


def cmd_stone(args, config, report):
    system = _require_system(args)
    space = stone_graph(system)
    report.add("vertices", list(space.vertices))
    report.add("edges", [f"{s} -{label}-> {t}" for s, t, label in space.edges])
    report.add("family", [space.format(m) for m in space.family.sets])
    if args.fmt == "graphml":
        if not args.output:
            raise GbdsError("--format graphml needs --output PATH")
        report.add("written", export_graphml(space_to_networkx(space), args.output))
    elif args.output:
        report.add("written", write_labelled_space(space, args.output))
    report.checks.extend(stone_checks(system))
    return space


def cmd_from_labelled(args, config, report):
    if not args.system:
        raise GbdsError("from-labelled needs --system PATH (a labelled space document)")
    space = parse_labelled_space(args.system)
    system = labelled_to_gbds(space)
    report.add("system", serialize_system(system))
    if args.output:
        report.add("written", write_system(system, args.output))
    return system


def cmd_verify(args, config, report, settings, seed):
    ring = parse_ring(args.ring)
    if not args.system and not args.random:
        raise GbdsError("verify needs --system PATH or --random N")
    report.add("seed", seed)
    if args.system:
        system = parse_system(args.system)
        report.checks.extend(system_checks(system, ring, settings, seed))
    if args.random:
        report.add("random_systems", args.random)
        report.checks.extend(random_system_checks(settings, seed, args.random, ring))


# === entry point ===

def run(argv=None):
    """Run one command; returns (report, direct output or None, exit status, format)."""
    argv = list(sys.argv[1:] if argv is None else argv)
    load_dotenv()
    config = load_config(_config_path(argv))
    args = build_parser(config).parse_args(argv)
    log = config.get("logging", {})
    logger = configure_logger(log.get("log_file", "logs/gbds_lab.log"), log.get("level", "INFO"))
    settings = VerificationSettings.from_config(config, args.bound)
    seed = resolve_seed(args.seed)

    if args.fmt == "graphml" and args.command != "stone":
        raise GbdsError("--format graphml only applies to stone")
    report = Report(args.command, args.system)
    direct = None
    command = args.command
    logger.info("gbds-lab %s (system=%s, bound=%d, seed=%d)", command, args.system, args.bound, seed)
    if command == "validate":
        cmd_validate(args, config, report)
    elif command == "info":
        cmd_info(args, config, report)
    elif command == "semigroup":
        cmd_semigroup(args, config, report, settings, seed)
    elif command == "algebra":
        rendered = cmd_algebra(args, config, report, settings, seed)
        if rendered is not None and args.fmt == "text":
            direct = rendered
    elif command == "tilde":
        cmd_tilde(args, config, report)
    elif command == "ideals":
        lattice = cmd_ideals(args, config, report)
        if args.fmt == "dot":
            direct = lattice_to_dot(lattice)
    elif command == "desingularize":
        cmd_desingularize(args, config, report, settings)
    elif command == "stone":
        space = cmd_stone(args, config, report)
        if args.fmt == "dot":
            direct = space_to_dot(space)
    elif command == "from-labelled":
        cmd_from_labelled(args, config, report)
        if args.fmt == "json":
            direct = json.dumps(report.sections["system"], indent=2, ensure_ascii=False)
    elif command == "verify":
        cmd_verify(args, config, report, settings, seed)
    report.finish()
    if command == "verify" and args.output:
        logger.info("report written to %s", export_report_json(report, args.output))
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        logger.error("gbds-lab %s: counterexamples in %s", command, ", ".join(failed))
    return report, direct, report.exit_code, args.fmt


def main(argv=None):
    try:
        report, direct, status, fmt = run(argv)
    except (GbdsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if direct is not None:
        print(direct, end="" if direct.endswith("\n") else "\n")
    else:
        print(report.render(fmt))
    return status


if __name__ == "__main__":
    sys.exit(main())
