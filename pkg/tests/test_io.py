import json
import math

import pytest
from shapely.geometry import MultiPolygon

from sectorcover import geometry as geo
from sectorcover.gsect import DecompositionConfig, gsect, merge_sectors
from sectorcover.io import (
    MapError,
    RunConfig,
    decomposition_from_dict,
    decomposition_to_dict,
    dumps,
    load_map,
    map_to_dict,
    parse_config,
    parse_map,
    write_atomic,
)

from conftest import L_SHAPE, MAPS


def test_parse_map_single():
    env = parse_map({"units": "m", "outer": L_SHAPE, "holes": []})
    assert geo.area(env) == pytest.approx(12.0)


def test_parse_map_units():
    with pytest.raises(MapError, match="unsupported units"):
        parse_map({"units": "cm", "outer": L_SHAPE})


def test_parse_map_errors():
    with pytest.raises(MapError, match="outer"):
        parse_map({"units": "m"})
    with pytest.raises(MapError, match=r"outer\[1\]"):
        parse_map({"outer": [[0, 0], [1], [1, 1]]})
    with pytest.raises(MapError, match="numbers"):
        parse_map({"outer": [[0, 0], ["a", 0], [1, 1]]})
    with pytest.raises(MapError, match="self-intersecting"):
        parse_map({"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]})
    with pytest.raises(MapError):
        parse_map([1, 2, 3])


def test_parse_map_components():
    env = load_map(MAPS / "two_rooms.json")
    assert isinstance(env, MultiPolygon)
    assert len(env.geoms) == 2


def test_overlapping_components_rejected():
    sq = [[0, 0], [2, 0], [2, 2], [0, 2]]
    sq2 = [[1, 1], [3, 1], [3, 3], [1, 3]]
    with pytest.raises(MapError, match="overlap"):
        parse_map({"components": [{"outer": sq}, {"outer": sq2}]})


def test_load_map_bad_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"outer": [\n  [0, 0],,\n]}')
    with pytest.raises(MapError, match=r"bad.json:2:\d+"):
        load_map(p)


@pytest.mark.parametrize("name", ["lshape", "rectangle", "comb", "lshape_notch", "two_rooms"])
def test_map_roundtrip(name):
    env = load_map(MAPS / f"{name}.json")
    again = parse_map(json.loads(dumps(map_to_dict(env))))
    assert again.symmetric_difference(env).area == 0.0


def test_parse_config():
    cfg = parse_config("# comment\ngamma = 0.9  # inline\nbeta=0\nmerge = no\ngtsp_seed = 7\n")
    assert (cfg.gamma, cfg.beta, cfg.merge, cfg.gtsp_seed) == (0.9, 0.0, False, 7)
    assert isinstance(cfg.gtsp_seed, int)


def test_parse_config_errors():
    with pytest.raises(MapError, match="line 2: unknown key 'gama'"):
        parse_config("gamma = 0.9\ngama = 1\n")
    with pytest.raises(MapError, match="line 1"):
        parse_config("gamma 0.9")
    with pytest.raises(MapError, match="merge"):
        parse_config("merge = maybe")


def test_resolved_defaults():
    r = RunConfig(tool_width=1.0).resolved()
    assert (r["beta"], r["cell_size"], r["min_sector_area"]) == (0.25, 0.25, 1.0)


def test_decomposition_roundtrip(lshape):
    d = gsect(lshape, (0.0, math.pi / 2), DecompositionConfig.for_tool(0.8, beta=0.0))
    back = decomposition_from_dict(json.loads(dumps(decomposition_to_dict(d))), lshape)
    assert decomposition_to_dict(back) == decomposition_to_dict(d)
    m = merge_sectors(d, lshape, 0.8)
    back = decomposition_from_dict(json.loads(dumps(decomposition_to_dict(m))), lshape)
    assert decomposition_to_dict(back) == decomposition_to_dict(m)


def test_write_atomic(tmp_path):
    target = tmp_path / "sub" / "out.txt"
    write_atomic(target, "hello\n")
    write_atomic(target, "again\n")
    assert target.read_text() == "again\n"
    assert [p.name for p in target.parent.iterdir()] == ["out.txt"]
