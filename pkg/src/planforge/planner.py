"""Planner integration: external planners as configured plugins, plus a
built-in breadth-first planner so the model-plan-validate loop runs with
no external binary.

The built-in planner grounds every operator over the type-respecting
object substitutions up front; fixtures are desk-scale, so simplicity
beats lazy grounding.
"""

from __future__ import annotations

import json
import shlex
import subprocess
import tempfile
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .pddl import (
    Atom,
    DomainAst,
    PddlError,
    Plan,
    PlanStep,
    ProblemAst,
    parse_domain,
    parse_plan,
    parse_problem,
)
from .validator import GroundAction, applicability, goal_satisfied, ground_operator, progress


class PlannerError(PddlError):
    pass


class ConfigError(PlannerError):
    pass


class SpawnError(PlannerError):
    pass


class PlannerTimeout(PlannerError, TimeoutError):
    pass


class NoPlanInOutput(PlannerError):
    pass


class NoPlanFound(PlannerError):
    pass


class LimitExceeded(PlannerError):
    pass


@dataclass(frozen=True)
class PlannerPlugin:
    name: str
    command: str  # placeholders: {domain} {problem} {plan_out}
    plan_source: str = "stdout"  # "stdout" | "file"
    timeout_seconds: float = 60.0


@dataclass(frozen=True)
class SearchLimits:
    max_states: int = 100_000
    max_plan_length: int = 64


def load_plugins(text: str) -> list[PlannerPlugin]:
    """Parse the plugin config: a JSON list of plugin objects."""
    try:
        raw = json.loads(text) if text.strip() else []
    except json.JSONDecodeError as exc:
        raise ConfigError(f"plugin config is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise ConfigError("plugin config must be a JSON list")
    plugins: list[PlannerPlugin] = []
    for i, entry in enumerate(raw):
        if not isinstance(entry, dict):
            raise ConfigError(f"plugin #{i}: expected an object")
        name = entry.get("name")
        if not name or not isinstance(name, str):
            raise ConfigError(f"plugin #{i}: missing field 'name'")
        command = entry.get("command")
        if not command or not isinstance(command, str):
            raise ConfigError(f"plugin {name!r}: missing field 'command'")
        if "{domain}" not in command:
            raise ConfigError(f"plugin {name!r}: command lacks {{domain}} placeholder")
        if "{problem}" not in command:
            raise ConfigError(f"plugin {name!r}: command lacks {{problem}} placeholder")
        source = entry.get("planSource", "stdout")
        if source not in ("stdout", "file"):
            raise ConfigError(f"plugin {name!r}: planSource must be 'stdout' or 'file'")
        if source == "file" and "{plan_out}" not in command:
            raise ConfigError(
                f"plugin {name!r}: planSource 'file' requires {{plan_out}} placeholder"
            )
        timeout = entry.get("timeoutSeconds", 60)
        if not isinstance(timeout, (int, float)) or timeout <= 0:
            raise ConfigError(f"plugin {name!r}: timeoutSeconds must be positive")
        unknown = set(entry) - {"name", "command", "planSource", "timeoutSeconds"}
        if unknown:
            raise ConfigError(f"plugin {name!r}: unknown field {sorted(unknown)[0]!r}")
        plugins.append(PlannerPlugin(name, command, source, float(timeout)))
    return plugins


def extract_plan(output: str) -> Plan:
    """Scrape plan steps from planner output.

    Any line without a parenthesized group is ignored; the survivors go
    through the normal plan text parser (which already strips comments
    and ``N :`` prefixes).
    """
    kept = [line for line in output.splitlines() if "(" in line and ")" in line]
    if not kept:
        raise NoPlanInOutput("planner output contains no parenthesized steps")
    plan = parse_plan("\n".join(kept))
    if not plan.steps:
        raise NoPlanInOutput("planner output contains no steps")
    return plan


def invoke_planner(plugin: PlannerPlugin, domain_text: str, problem_text: str) -> Plan:
    """Run one external planner and parse the plan it produced."""
    with tempfile.TemporaryDirectory(prefix="planforge-") as tmp:
        tmpdir = Path(tmp)
        domain_path = tmpdir / "domain.pddl"
        problem_path = tmpdir / "problem.pddl"
        plan_path = tmpdir / "plan.txt"
        domain_path.write_text(domain_text)
        problem_path.write_text(problem_text)
        substitutions = {
            "{domain}": str(domain_path),
            "{problem}": str(problem_path),
            "{plan_out}": str(plan_path),
        }
        argv = []
        for token in shlex.split(plugin.command):
            for placeholder, value in substitutions.items():
                token = token.replace(placeholder, value)
            argv.append(token)
        try:
            completed = subprocess.run(
                argv,
                capture_output=True,
                text=True,
                timeout=plugin.timeout_seconds,
            )
        except subprocess.TimeoutExpired as exc:
            raise PlannerTimeout(
                f"planner {plugin.name!r} exceeded {plugin.timeout_seconds}s"
            ) from exc
        except OSError as exc:
            raise SpawnError(f"cannot run planner {plugin.name!r}: {exc}") from exc
        if plugin.plan_source == "file":
            if not plan_path.exists():
                raise NoPlanInOutput(
                    f"planner {plugin.name!r} wrote no plan file "
                    f"(exit {completed.returncode})"
                )
            output = plan_path.read_text()
        else:
            output = completed.stdout
        return extract_plan(output)


def _ground_all(domain: DomainAst, problem: ProblemAst) -> list[GroundAction]:
    """Every type-respecting instantiation, in (name, args) order."""
    scope = list(problem.objects) + list(domain.constants)
    actions: list[GroundAction] = []
    for schema in domain.actions:
        pools: list[list[str]] = []
        for _, declared in schema.params:
            pools.append(
                [obj for obj, typ in scope if domain.types.is_subtype(typ, declared)]
            )
        stack: list[tuple[str, ...]] = [()]
        for pool in pools:
            stack = [args + (obj,) for args in stack for obj in pool]
        for args in stack:
            actions.append(ground_operator(schema, args))
    actions.sort(key=lambda a: (a.name, a.args))
    return actions


def bfs_plan(
    domain: DomainAst, problem: ProblemAst, limits: SearchLimits = SearchLimits()
) -> Plan:
    """Shortest plan by breadth-first search over ground states.

    Deterministic: ground actions expand in lexicographic (name, args)
    order, so ties always break the same way.
    """
    init = frozenset(problem.init)
    if goal_satisfied(problem, init):
        return Plan(())
    actions = _ground_all(domain, problem)
    parent: dict[frozenset[Atom], tuple[frozenset[Atom], GroundAction] | None] = {init: None}
    queue: deque[tuple[frozenset[Atom], int]] = deque([(init, 0)])
    truncated = False
    while queue:
        state, depth = queue.popleft()
        if depth >= limits.max_plan_length:
            truncated = True
            continue
        for action in actions:
            ok, _ = applicability(state, action)
            if not ok:
                continue
            successor = progress(state, action)
            if successor in parent:
                continue
            if len(parent) >= limits.max_states:
                raise LimitExceeded(f"state limit {limits.max_states} reached")
            parent[successor] = (state, action)
            if goal_satisfied(problem, successor):
                steps: list[PlanStep] = []
                cursor: frozenset[Atom] | None = successor
                while parent[cursor] is not None:
                    prev, act = parent[cursor]  # type: ignore[misc]
                    steps.append(PlanStep(act.name, act.args))
                    cursor = prev
                return Plan(tuple(reversed(steps)))
            queue.append((successor, depth + 1))
    if truncated:
        raise LimitExceeded(f"no plan within length {limits.max_plan_length}")
    raise NoPlanFound("search space exhausted without reaching the goal")


def plan_with(
    domain_text: str,
    problem_text: str,
    plugin: PlannerPlugin | None = None,
    limits: SearchLimits = SearchLimits(),
) -> Plan:
    """Route to the built-in planner or a plugin; both return a parsed Plan."""
    if plugin is not None:
        return invoke_planner(plugin, domain_text, problem_text)
    return bfs_plan(parse_domain(domain_text), parse_problem(problem_text), limits)
