"""Map files, run configuration and JSON (de)serialization."""

from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any

from shapely.geometry import MultiPolygon, Polygon
from shapely.geometry.base import BaseGeometry

from . import geometry as geo
from .gsect import CoverageRegion, CoverageStats, Decomposition, compute_stats
from .rect_search import Sector


class MapError(ValueError):
    """A map or config file could not be parsed into valid inputs."""


# ---------------------------------------------------------------- map files


def _points(value: Any, where: str) -> list[tuple[float, float]]:
    if not isinstance(value, list):
        raise MapError(f"{where}: expected a list of [x, y] pairs")
    pts = []
    for i, p in enumerate(value):
        if not (isinstance(p, (list, tuple)) and len(p) == 2):
            raise MapError(f"{where}[{i}]: expected an [x, y] pair, got {p!r}")
        try:
            x, y = float(p[0]), float(p[1])
        except (TypeError, ValueError):
            raise MapError(f"{where}[{i}]: coordinates must be numbers, got {p!r}") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise MapError(f"{where}[{i}]: coordinates must be finite")
        pts.append((x, y))
    return pts


def _component(d: Any, where: str) -> Polygon:
    if not isinstance(d, dict) or "outer" not in d:
        raise MapError(f"{where}: missing field 'outer'")
    outer = _points(d["outer"], f"{where}outer")
    holes_raw = d.get("holes", [])
    if not isinstance(holes_raw, list):
        raise MapError(f"{where}holes: expected a list of rings")
    holes = [_points(h, f"{where}holes[{i}]") for i, h in enumerate(holes_raw)]
    try:
        return geo.make_environment(outer, holes)
    except geo.GeometryError as err:
        raise MapError(f"{where}{err}") from None


def parse_map(data: Any) -> Polygon | MultiPolygon:
    """Environment from a decoded map document.

    The document holds ``units`` (must be ``"m"``) and either ``outer`` /
    ``holes`` for a single free-space component or ``components``, a list of
    such objects, for maps whose free space is split into several rooms.
    """
    if not isinstance(data, dict):
        raise MapError("map: expected a JSON object")
    units = data.get("units", "m")
    if units != "m":
        raise MapError(f"units: unsupported units {units!r} (only 'm')")
    if "components" in data:
        comps = data["components"]
        if not isinstance(comps, list) or not comps:
            raise MapError("components: expected a non-empty list")
        polys = [_component(c, f"components[{i}].") for i, c in enumerate(comps)]
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                if polys[i].intersects(polys[j]):
                    raise MapError(f"components[{i}] and components[{j}] overlap")
        return MultiPolygon(polys)
    return _component(data, "")


def load_map(path: str | os.PathLike) -> Polygon | MultiPolygon:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise MapError(f"{path}:{err.lineno}:{err.colno}: invalid JSON: {err.msg}") from None
    return parse_map(data)


def _polygon_dict(p: Polygon) -> dict:
    return {
        "outer": [list(c) for c in geo.ring_coords(p.exterior)],
        "holes": [[list(c) for c in geo.ring_coords(r)] for r in p.interiors],
    }


def map_to_dict(env: BaseGeometry) -> dict:
    comps = list(geo.as_region(env).geoms)
    if len(comps) == 1:
        return {"units": "m", **_polygon_dict(comps[0])}
    return {"units": "m", "components": [_polygon_dict(p) for p in comps]}


# ------------------------------------------------------------------- config


@dataclass
class RunConfig:
    gamma: float = 0.95
    beta: float | None = None  # tool_width / 4 when unset
    max_sectors: int = 100
    cell_size: float | None = None  # tool_width / 4 when unset
    min_sector_area: float | None = None  # tool_width ** 2 when unset
    cluster_tol_deg: float = 2.0
    max_orientations: int = 8
    tool_width: float = 0.8
    v_max: float = 1.0
    accel: float = 0.5
    gtsp_seed: int = 0
    merge: bool = True

    def resolved(self) -> dict:
        d = asdict(self)
        l = self.tool_width
        d["beta"] = l / 4 if self.beta is None else self.beta
        d["cell_size"] = l / 4 if self.cell_size is None else self.cell_size
        d["min_sector_area"] = l * l if self.min_sector_area is None else self.min_sector_area
        return d


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def _coerce(name: str, raw: str, lineno: int | None):
    where = f"line {lineno}: " if lineno else ""
    ftype = {f.name: f.type for f in fields(RunConfig)}[name]
    try:
        if "bool" in str(ftype):
            return _BOOL[raw.strip().lower()]
        if "int" in str(ftype) and "float" not in str(ftype):
            return int(raw)
        return float(raw)
    except (KeyError, ValueError):
        raise MapError(f"{where}{name}: cannot parse value {raw!r}") from None


def parse_config(text: str) -> RunConfig:
    """Flat ``key = value`` config; ``#`` starts a comment."""
    cfg = RunConfig()
    known = {f.name for f in fields(RunConfig)}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise MapError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in known:
            raise MapError(f"line {lineno}: unknown key {key!r}")
        setattr(cfg, key, _coerce(key, value, lineno))
    return cfg


def load_config(path: str | os.PathLike | None) -> RunConfig:
    if path is None:
        return RunConfig()
    return parse_config(Path(path).read_text())


# --------------------------------------------------------- decompositions


def _region_dict(region: CoverageRegion) -> dict:
    d: dict[str, Any] = {"theta": region.theta, "merged": region.is_merged}
    if region.sector is not None and not region.is_merged:
        s = region.sector
        d.update(
            center=list(s.center),
            width=s.width,
            height=s.height,
            corners=[list(c) for c in s.corners()],
        )
    else:
        d["polygons"] = [_polygon_dict(p) for p in geo.as_region(region.shape).geoms]
    return d


def _region_from_dict(d: dict) -> CoverageRegion:
    if "polygons" in d:
        shape = MultiPolygon([Polygon(p["outer"], p["holes"]) for p in d["polygons"]])
        return CoverageRegion(shape, d["theta"], d["merged"], None)
    s = Sector(tuple(d["center"]), d["width"], d["height"], d["theta"])
    return CoverageRegion.from_sector(s)


def decomposition_to_dict(decomp: Decomposition) -> dict:
    return {
        "status": decomp.status,
        "stats": asdict(decomp.stats),
        "sectors": [_region_dict(r) for r in decomp.sectors],
    }


def decomposition_from_dict(d: dict, env: BaseGeometry) -> Decomposition:
    regions = [_region_from_dict(r) for r in d["sectors"]]
    covered, _ = compute_stats(regions, env)
    return Decomposition(regions, covered, CoverageStats(**d["stats"]), d["status"] == "ok")


# ------------------------------------------------------------------ output


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a temp file in the same directory, then rename into place."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
