"""JSON instance/solution documents and CSV writers."""
from __future__ import annotations

import csv
import hashlib
import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Iterable, Optional, Union

from .chain import DualChain
from .decode import Schedule, TaskTiming, fdd
from .errors import FormatError, InstanceError, RepresentationError
from .generate import rectilinear
from .model import Fleet, Instance, TaskSpec, TimingParams, check_instance

PathLike = Union[str, Path]

TIMING_FIELDS = [f.name for f in fields(TaskTiming)]


# -- instances -----------------------------------------------------------------


def _req(obj: Any, key: str, where: str):
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise FormatError(f"{where}.{key}: missing required field")
    return obj[key]


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise FormatError(f"{where}: expected a number, got {x!r}")
    return float(x)


def _integer(x: Any, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(f"{where}: expected an integer, got {x!r}")
    return x


def _int_list(x: Any, where: str) -> list[int]:
    if not isinstance(x, list):
        raise FormatError(f"{where}: expected a list, got {type(x).__name__}")
    return [_integer(v, f"{where}[{i}]") for i, v in enumerate(x)]


def parse_json(text: str, source: str = "<string>") -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{source}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def instance_from_dict(doc: Any) -> Instance:
    if not isinstance(doc, dict):
        raise FormatError("document root: expected an object")
    if "distances" in doc:
        raw = doc["distances"]
        if not isinstance(raw, list) or not all(isinstance(r, list) for r in raw):
            raise FormatError("distances: expected a list of rows")
        dist = [[_number(v, f"distances[{a}][{b}]") for b, v in enumerate(row)] for a, row in enumerate(raw)]
        pos = doc.get("positions")
        if isinstance(pos, int) and not isinstance(pos, bool) and pos != len(dist):
            raise FormatError(f"positions: says {pos} but distances has {len(dist)} rows")
    elif isinstance(doc.get("positions"), list):
        coords = []
        for i, p in enumerate(doc["positions"]):
            if not isinstance(p, list) or len(p) != 2:
                raise FormatError(f"positions[{i}]: expected [x, y]")
            coords.append((_number(p[0], f"positions[{i}][0]"), _number(p[1], f"positions[{i}][1]")))
        dist = rectilinear(coords)
    else:
        raise FormatError("distances: missing (give a matrix, or coordinates under positions)")

    tasks_raw = _req(doc, "tasks", "document")
    if not isinstance(tasks_raw, list):
        raise FormatError("tasks: expected a list")
    tasks = []
    for k, t in enumerate(tasks_raw):
        w = f"tasks[{k}]"
        tasks.append(
            TaskSpec(
                id=_integer(_req(t, "id", w), f"{w}.id"),
                source=_integer(_req(t, "source", w), f"{w}.source"),
                dest=_integer(_req(t, "dest", w), f"{w}.dest"),
                due=_number(_req(t, "due", w), f"{w}.due"),
                handling=_number(_req(t, "handling", w), f"{w}.handling"),
            )
        )
    fl = _req(doc, "fleet", "document")
    fleet = Fleet(
        _int_list(_req(fl, "carrier_starts", "fleet"), "fleet.carrier_starts"),
        _int_list(_req(fl, "shuttle_starts", "fleet"), "fleet.shuttle_starts"),
    )
    p = doc.get("params", {})
    if not isinstance(p, dict):
        raise FormatError("params: expected an object")
    known = {"velocity", "attach", "detach", "pickup", "lambda"}
    extra = set(p) - known
    if extra:
        raise FormatError(f"params.{sorted(extra)[0]}: unknown parameter")
    d = TimingParams()
    timing = TimingParams(
        velocity=_number(p.get("velocity", d.velocity), "params.velocity"),
        attach=_number(p.get("attach", d.attach), "params.attach"),
        detach=_number(p.get("detach", d.detach), "params.detach"),
        pickup=_number(p.get("pickup", d.pickup), "params.pickup"),
        lam=_number(p.get("lambda", d.lam), "params.lambda"),
    )
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise FormatError("name: expected a string")
    inst = Instance(tasks=tasks, fleet=fleet, dist=dist, timing=timing, name=name)
    try:
        return check_instance(inst)
    except InstanceError as exc:
        raise FormatError(str(exc)) from None


def instance_to_dict(inst: Instance) -> dict:
    tm = inst.timing
    return {
        "name": inst.name,
        "positions": inst.n_positions,
        "distances": [list(row) for row in inst.dist],
        "tasks": [
            {"id": t.id, "source": t.source, "dest": t.dest, "due": t.due, "handling": t.handling}
            for t in inst.tasks
        ],
        "fleet": {"carrier_starts": list(inst.fleet.carrier_starts), "shuttle_starts": list(inst.fleet.shuttle_starts)},
        "params": {
            "velocity": tm.velocity,
            "attach": tm.attach,
            "detach": tm.detach,
            "pickup": tm.pickup,
            "lambda": tm.lam,
        },
    }


def dumps_instance(inst: Instance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def load_instance(path: PathLike) -> Instance:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return instance_from_dict(parse_json(text, str(path)))
    except FormatError as exc:
        msg = str(exc)
        raise FormatError(msg if msg.startswith(str(path)) else f"{path}: {msg}") from None


def save_instance(inst: Instance, path: PathLike) -> None:
    Path(path).write_text(dumps_instance(inst))


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(dumps_instance(inst).encode()).hexdigest()


# -- solutions -----------------------------------------------------------------


def _json_float(x: float) -> Optional[float]:
    return x if math.isfinite(x) else None


def solution_to_dict(
    inst: Instance,
    chain: DualChain,
    schedule: Schedule,
    *,
    instance_path: Optional[str] = None,
    metadata: Optional[dict] = None,
) -> dict:
    return {
        "instance": {"name": inst.name, "path": instance_path, "sha256": instance_digest(inst)},
        "chain": {"carrier_routes": chain.carrier_routes, "shuttle_routes": chain.shuttle_routes},
        "timings": {str(i): asdict(schedule.per_task[i]) for i in sorted(schedule.per_task)},
        "objective": _json_float(schedule.objective),
        "feasible": schedule.feasible,
        "firing_order": list(schedule.firing_order),
        "metadata": metadata or {},
    }


def save_solution(doc: dict, path: PathLike) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_solution(path: PathLike) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(f"{path}: cannot read ({exc.strerror})") from None
    doc = parse_json(text, str(path))
    for key in ("chain", "timings", "objective", "feasible"):
        _req(doc, key, "document")
    return doc


def chain_from_dict(doc: dict) -> DualChain:
    ch = _req(doc, "chain", "document")
    carrier = _req(ch, "carrier_routes", "chain")
    shuttle = _req(ch, "shuttle_routes", "chain")
    if not isinstance(carrier, list) or not isinstance(shuttle, list):
        raise FormatError("chain: routes must be lists")
    try:
        return DualChain(
            [_int_list(r, f"chain.carrier_routes[{i}]") for i, r in enumerate(carrier)],
            [_int_list(r, f"chain.shuttle_routes[{i}]") for i, r in enumerate(shuttle)],
        )
    except RepresentationError as exc:
        raise FormatError(f"chain: {exc}") from None


@dataclass
class VerifyReport:
    ok: bool
    objective: float
    problems: list[str]

    def summary(self) -> str:
        if self.ok:
            return f"OK, objective matches ({self.objective!r})"
        return "MISMATCH:\n  " + "\n  ".join(self.problems)


def verify_solution(inst: Instance, doc: dict) -> VerifyReport:
    """Re-decode the stored chain and compare every stored number exactly."""
    chain = chain_from_dict(doc)
    try:
        sched = fdd(inst, chain)
    except RepresentationError as exc:
        return VerifyReport(False, math.inf, [f"chain does not fit the instance: {exc}"])
    problems = []
    digest = (doc.get("instance") or {}).get("sha256")
    if digest and digest != instance_digest(inst):
        problems.append("instance digest differs from the one recorded in the solution")
    if len(chain) != inst.n:
        problems.append(f"chain places {len(chain)} of {inst.n} tasks")
    if bool(doc["feasible"]) != sched.feasible:
        problems.append(f"feasible flag {doc['feasible']} but decoding gives {sched.feasible}")
    stored_f = doc["objective"]
    actual_f = _json_float(sched.objective)
    if stored_f != actual_f:
        problems.append(f"objective {stored_f!r} but decoding gives {actual_f!r}")
    timings = doc["timings"]
    if not isinstance(timings, dict):
        problems.append("timings: expected an object keyed by task id")
        timings = {}
    if set(timings) != {str(i) for i in sched.per_task}:
        problems.append("timings: task set differs from the decoded schedule")
    for key, row in timings.items():
        try:
            tm = sched.per_task[int(key)]
        except (KeyError, ValueError):
            continue
        for f in TIMING_FIELDS:
            if not isinstance(row, dict) or row.get(f) != getattr(tm, f):
                got = row.get(f) if isinstance(row, dict) else None
                problems.append(f"timings.{key}.{f}: stored {got!r}, decoded {getattr(tm, f)!r}")
    return VerifyReport(not problems, sched.objective, problems)


# -- CSV -----------------------------------------------------------------------


def write_csv(path: PathLike, header: list[str], rows: Iterable[Iterable]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow(row)


RUN_LOG_HEADER = ["iteration", "elapsed_ms", "removal", "insertion", "current_F", "best_F", "accepted"]


def write_run_log(path: PathLike, log) -> None:
    write_csv(
        path,
        RUN_LOG_HEADER,
        (
            [r.iteration, f"{r.elapsed_ms:.3f}", r.removal, r.insertion, repr(r.current_f), repr(r.best_f), int(r.accepted)]
            for r in log
        ),
    )
