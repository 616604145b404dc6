"""HTTP+JSON service over the workbench, consumed by the browser UI.

Concurrency contract: unlimited concurrent readers, one writer per
project (optimistic, by revision number).  Every project-scoped response
carries the ``X-Project-Revision`` header naming the revision it was
computed against.  Projects snapshot to XML in the data directory on
every successful mutation, so nothing here outlives the disk documents.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import jsonio
from .kb import KnowledgeBase, complete, default_kb
from .pddl import Plan, PddlError, parse_plan
from .planner import (
    LimitExceeded,
    NoPlanFound,
    PlannerPlugin,
    SearchLimits,
    bfs_plan,
    invoke_planner,
)
from .project_xml import export_xml, import_xml
from .repair import NoFlaw, RepairAdvice, StaleAdvice, UnknownChoice, advise, apply_advice
from .validator import IndexBeyondFlaw, ValidationReport, state_at, validate
from .workspace import (
    DeclareClass,
    DeclarePredicate,
    Project,
    RemoveClass,
    RemoveOperator,
    RemovePredicate,
    RemoveProblem,
    RenameSymbol,
    UpsertOperator,
    UpsertProblem,
    UnknownTarget,
    WorkspaceError,
    apply_edit,
    check_consistency,
    export_pddl,
    project_to_domain,
)


class HttpError(Exception):
    def __init__(self, status: int, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.status = status
        self.code = code
        self.detail = detail or code


@dataclass
class ProjectRecord:
    project: Project
    revision: int = 1
    report: ValidationReport | None = None
    report_revision: int | None = None
    report_problem: str | None = None
    report_plan: Plan | None = None
    advice: RepairAdvice | None = None
    advice_revision: int | None = None
    last_plan: Plan | None = None
    lock: threading.RLock = field(default_factory=threading.RLock)


def _edit_from_json(data: dict):
    kind = data.get("kind")
    try:
        if kind == "DeclareClass":
            return DeclareClass(str(data["name"]).lower(), str(data["parent"]).lower())
        if kind == "RemoveClass":
            return RemoveClass(str(data["name"]).lower())
        if kind == "DeclarePredicate":
            return DeclarePredicate(jsonio.predicate_from_json(data["predicate"]))
        if kind == "RemovePredicate":
            return RemovePredicate(str(data["name"]).lower(), int(data["arity"]))
        if kind == "UpsertOperator":
            return UpsertOperator(jsonio.operator_from_json(data["operator"]))
        if kind == "RemoveOperator":
            return RemoveOperator(str(data["name"]).lower())
        if kind == "UpsertProblem":
            return UpsertProblem(jsonio.problem_from_json(data["problem"], ""))
        if kind == "RemoveProblem":
            return RemoveProblem(str(data["name"]).lower())
        if kind == "RenameSymbol":
            return RenameSymbol(
                str(data["symbolKind"]).lower(),
                str(data["old"]).lower(),
                str(data["new"]).lower(),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise HttpError(400, "MalformedEdit", f"bad {kind} payload: {exc}") from exc
    raise HttpError(400, "MalformedEdit", f"unknown edit kind {kind!r}")


class WorkbenchService:
    """Embeddable service; ``start()`` runs it on a daemon thread."""

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = 0,
        kb: KnowledgeBase | None = None,
        plugins: list[PlannerPlugin] | None = None,
        data_dir: str | None = None,
    ):
        self.host = host
        self.kb = kb if kb is not None else default_kb()
        self.plugins = {p.name: p for p in (plugins or [])}
        self.data_dir = Path(data_dir) if data_dir else None
        self.records: dict[str, ProjectRecord] = {}
        self.store_lock = threading.Lock()
        service = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # tests stay quiet
                pass

            def do_OPTIONS(self):
                self.send_response(204)
                self._cors()
                self.end_headers()

            def do_GET(self):
                service.dispatch(self, "GET")

            def do_PUT(self):
                service.dispatch(self, "PUT")

            def do_POST(self):
                service.dispatch(self, "POST")

            def _cors(self):
                self.send_header("Access-Control-Allow-Origin", "*")
                self.send_header("Access-Control-Allow-Methods", "GET, PUT, POST, OPTIONS")
                self.send_header("Access-Control-Allow-Headers", "Content-Type")

        self.server = ThreadingHTTPServer((host, port), Handler)
        self.port = self.server.server_address[1]
        self.thread: threading.Thread | None = None
        if self.data_dir is not None:
            self.data_dir.mkdir(parents=True, exist_ok=True)
            self._load_snapshots()

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "WorkbenchService":
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()
        return self

    def wait(self) -> None:
        if self.thread is not None:
            self.thread.join()

    def stop(self) -> None:
        self.server.shutdown()
        self.server.server_close()

    @property
    def base_url(self) -> str:
        return f"http://{self.host}:{self.port}"

    # -- persistence ---------------------------------------------------------

    def _load_snapshots(self) -> None:
        assert self.data_dir is not None
        for path in sorted(self.data_dir.glob("*.kavi.xml")):
            project_id = path.name[: -len(".kavi.xml")]
            self.records[project_id] = ProjectRecord(project=import_xml(path.read_text()))

    def _snapshot(self, project_id: str, record: ProjectRecord) -> None:
        if self.data_dir is not None:
            (self.data_dir / f"{project_id}.kavi.xml").write_text(
                export_xml(record.project)
            )

    # -- request plumbing -------------------------------------------------------

    ROUTES = [
        ("PUT", re.compile(r"^/projects/([a-z0-9_-]+)$"), "put_project"),
        ("GET", re.compile(r"^/projects/([a-z0-9_-]+)$"), "get_project"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/edits$"), "post_edits"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/check$"), "post_check"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/export/pddl$"), "post_export_pddl"),
        ("GET", re.compile(r"^/kb/complete$"), "get_complete"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/plan$"), "post_plan"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/validate$"), "post_validate"),
        ("GET", re.compile(r"^/projects/([a-z0-9_-]+)/report/state/([0-9]+)$"), "get_state"),
        ("GET", re.compile(r"^/projects/([a-z0-9_-]+)/report/links$"), "get_links"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/repair/advise$"), "post_advise"),
        ("POST", re.compile(r"^/projects/([a-z0-9_-]+)/repair/apply$"), "post_apply"),
    ]

    def dispatch(self, handler: BaseHTTPRequestHandler, method: str) -> None:
        url = urlparse(handler.path)
        query = {k: v[0] for k, v in parse_qs(url.query).items()}
        try:
            for route_method, pattern, name in self.ROUTES:
                if route_method != method:
                    continue
                match = pattern.match(url.path)
                if match:
                    body = self._read_body(handler)
                    payload, revision = getattr(self, name)(*match.groups(), body=body, query=query)
                    self._respond(handler, 200, payload, revision)
                    return
            raise HttpError(404, "NoSuchEndpoint", f"{method} {url.path}")
        except HttpError as exc:
            self._respond(handler, exc.status, {"error": exc.code, "detail": exc.detail}, None)
        except (PddlError, WorkspaceError) as exc:
            self._respond(
                handler, 400, {"error": type(exc).__name__, "detail": str(exc)}, None
            )
        except Exception as exc:  # noqa: BLE001 — surface, do not kill the thread
            self._respond(
                handler, 500, {"error": "InternalError", "detail": str(exc)}, None
            )

    def _read_body(self, handler: BaseHTTPRequestHandler) -> dict:
        length = int(handler.headers.get("Content-Length") or 0)
        if length == 0:
            return {}
        raw = handler.rfile.read(length)
        try:
            data = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise HttpError(400, "MalformedJson", str(exc)) from exc
        if not isinstance(data, dict):
            raise HttpError(400, "MalformedJson", "body must be a JSON object")
        return data

    def _respond(self, handler, status: int, payload, revision: int | None) -> None:
        body = (jsonio.dumps(payload) + "\n").encode()
        handler.send_response(status)
        handler.send_header("Content-Type", "application/json")
        handler.send_header("Content-Length", str(len(body)))
        if revision is not None:
            handler.send_header("X-Project-Revision", str(revision))
        handler.send_header("Access-Control-Allow-Origin", "*")
        handler.end_headers()
        handler.wfile.write(body)

    # -- record access ----------------------------------------------------------

    def _record(self, project_id: str) -> ProjectRecord:
        with self.store_lock:
            record = self.records.get(project_id)
        if record is None:
            raise HttpError(404, "UnknownProject", f"no project {project_id!r}")
        return record

    @staticmethod
    def _check_revision(record: ProjectRecord, body: dict) -> None:
        base = body.get("baseRevision")
        if base is not None and int(base) != record.revision:
            raise HttpError(
                409,
                "RevisionConflict",
                f"base revision {base} does not match current {record.revision}",
            )

    # -- endpoints ----------------------------------------------------------------

    def put_project(self, project_id: str, body: dict, query: dict):
        xml = body.get("xml")
        if not isinstance(xml, str):
            raise HttpError(400, "MalformedPayload", "PUT body needs an 'xml' string")
        project = import_xml(xml)
        with self.store_lock:
            record = self.records.get(project_id)
            if record is None:
                if body.get("baseRevision") not in (None, 0):
                    raise HttpError(404, "UnknownProject", f"no project {project_id!r}")
                record = ProjectRecord(project=project)
                self.records[project_id] = record
                self._snapshot(project_id, record)
                return self._project_doc(project_id, record), record.revision
        with record.lock:
            if body.get("baseRevision") is None or int(body["baseRevision"]) != record.revision:
                raise HttpError(
                    409,
                    "RevisionConflict",
                    f"project exists at revision {record.revision}; "
                    "PUT must carry a matching baseRevision",
                )
            record.project = project
            record.revision += 1
            record.report = record.advice = None
            record.report_revision = record.advice_revision = None
            self._snapshot(project_id, record)
            return self._project_doc(project_id, record), record.revision

    def _project_doc(self, project_id: str, record: ProjectRecord):
        return {
            "id": project_id,
            "revision": record.revision,
            "xml": export_xml(record.project),
            "model": jsonio.project_json(record.project),
        }

    def get_project(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            return self._project_doc(project_id, record), record.revision

    def post_edits(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        edits = body.get("edits")
        if not isinstance(edits, list) or not edits:
            raise HttpError(400, "MalformedPayload", "body needs a nonempty 'edits' list")
        with record.lock:
            self._check_revision(record, body)
            project = record.project
            diagnostics = []
            try:
                for data in edits:
                    project, diagnostics = apply_edit(project, _edit_from_json(data))
            except UnknownTarget as exc:
                raise HttpError(400, "UnknownTarget", str(exc)) from exc
            record.project = project
            record.revision += 1
            record.report = record.advice = None
            record.report_revision = record.advice_revision = None
            self._snapshot(project_id, record)
            return jsonio.diagnostics_json(diagnostics), record.revision

    def post_check(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            return (
                jsonio.diagnostics_json(check_consistency(record.project)),
                record.revision,
            )

    def post_export_pddl(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            domain_text, problem_text = export_pddl(record.project, body.get("problem"))
            return {"domain": domain_text, "problem": problem_text}, record.revision

    def get_complete(self, body: dict, query: dict):
        kind = query.get("kind", "predicate")
        if kind not in ("type", "predicate"):
            raise HttpError(400, "MalformedPayload", f"bad completion kind {kind!r}")
        results = complete(self.kb, kind, query.get("prefix", ""))
        return [t.format() for t in results], None

    def post_plan(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            self._check_revision(record, body)
            problem_name = body.get("problem")
            if not problem_name:
                raise HttpError(400, "MalformedPayload", "body needs a 'problem' name")
            domain_text, problem_text = export_pddl(record.project, problem_name)
            assert problem_text is not None
            planner_name = body.get("planner")
            try:
                if planner_name:
                    plugin = self.plugins.get(planner_name)
                    if plugin is None:
                        raise HttpError(
                            400, "UnknownPlanner", f"no plugin named {planner_name!r}"
                        )
                    plan = invoke_planner(plugin, domain_text, problem_text)
                else:
                    limits = body.get("limits") or {}
                    plan = bfs_plan(
                        project_to_domain(record.project),
                        record.project.problem(problem_name.lower()),
                        SearchLimits(
                            int(limits.get("maxStates", 100_000)),
                            int(limits.get("maxPlanLength", 64)),
                        ),
                    )
            except (NoPlanFound, LimitExceeded) as exc:
                return {"plan": None, "failure": type(exc).__name__,
                        "detail": str(exc)}, record.revision
            record.last_plan = plan
            return jsonio.plan_json(plan), record.revision

    def post_validate(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            self._check_revision(record, body)
            problem_name = body.get("problem")
            if not problem_name:
                raise HttpError(400, "MalformedPayload", "body needs a 'problem' name")
            problem = record.project.problem(str(problem_name).lower())
            if problem is None:
                raise HttpError(404, "UnknownProblem", f"no problem {problem_name!r}")
            if "plan" in body:
                plan = parse_plan(str(body["plan"]))
            elif record.last_plan is not None:
                plan = record.last_plan
            else:
                raise HttpError(400, "MalformedPayload", "no 'plan' text and no stored plan")
            report = validate(project_to_domain(record.project), problem, plan)
            record.report = report
            record.report_revision = record.revision
            record.report_problem = problem.name
            record.report_plan = plan
            record.advice = None
            record.advice_revision = None
            return jsonio.report_json(report), record.revision

    def _current_report(self, record: ProjectRecord) -> ValidationReport:
        if record.report is None:
            raise HttpError(404, "NoReport", "validate first")
        if record.report_revision != record.revision:
            raise HttpError(
                409,
                "StaleReport",
                f"report was computed at revision {record.report_revision}, "
                f"project is at {record.revision}; re-validate",
            )
        return record.report

    def get_state(self, project_id: str, k: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            report = self._current_report(record)
            try:
                state = state_at(report, int(k))
            except IndexBeyondFlaw as exc:
                raise HttpError(400, "IndexBeyondFlaw", str(exc)) from exc
            return {"k": int(k), "state": jsonio.state_json(state)}, record.revision

    def get_links(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            report = self._current_report(record)
            return [jsonio.link_json(l) for l in report.links], record.revision

    def post_advise(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        with record.lock:
            self._check_revision(record, body)
            report = self._current_report(record)
            problem = record.project.problem(record.report_problem or "")
            if problem is None or record.report_plan is None:
                raise HttpError(404, "NoReport", "validate first")
            try:
                advice = advise(
                    project_to_domain(record.project), problem, record.report_plan, report
                )
            except NoFlaw as exc:
                raise HttpError(400, "NoFlaw", str(exc)) from exc
            record.advice = advice
            record.advice_revision = record.revision
            return jsonio.advice_json(advice), record.revision

    def post_apply(self, project_id: str, body: dict, query: dict):
        record = self._record(project_id)
        option = body.get("option")
        if option not in ("A", "B"):
            raise HttpError(400, "MalformedPayload", "body needs 'option': 'A' or 'B'")
        with record.lock:
            self._check_revision(record, body)
            if record.advice is None:
                raise HttpError(404, "NoAdvice", "advise first")
            if record.advice_revision != record.revision:
                raise HttpError(409, "StaleAdvice", "project changed since advice; re-advise")
            index = body.get("index")
            try:
                repaired, diagnostics = apply_advice(
                    project_to_domain(record.project),
                    record.advice,
                    option,
                    int(index) if index is not None else None,
                )
            except (StaleAdvice, UnknownChoice) as exc:
                status = 409 if isinstance(exc, StaleAdvice) else 400
                raise HttpError(status, type(exc).__name__, str(exc)) from exc
            record.project = Project(
                name=record.project.name,
                kb=record.project.kb,
                classes=record.project.classes,
                predicates=record.project.predicates,
                operators=repaired.actions,
                problems=record.project.problems,
            )
            record.revision += 1
            record.report = record.advice = None
            record.report_revision = record.advice_revision = None
            self._snapshot(project_id, record)
            return jsonio.diagnostics_json(diagnostics), record.revision
