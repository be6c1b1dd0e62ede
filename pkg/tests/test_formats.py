import json
from pathlib import Path

import pytest

from cayley_wreath.formats import (ConfigError, ProjectConfig, group_from_dict, group_to_dict,
                                   hspec_from_dict, hspec_to_dict, load_structure,
                                   save_structure, structure_to_dict)
from cayley_wreath.groups import GroupSpecError, IntegerGroup, infinite_dihedral_spec

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


def test_shipped_configs_load():
    for path in sorted(CONFIGS.glob("*.json")):
        cfg = ProjectConfig.load(path)
        group, hspec = cfg.load_groups()
        assert cfg.window == (-2, 2) and cfg.seed == 0
        assert hspec.m >= 0 and group is not None


def test_config_paths_are_relative_to_the_file(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps({"base": "g/b.json", "hspec": "g/h.json"}))
    cfg = ProjectConfig.load(tmp_path / "c.json")
    assert cfg.base == tmp_path / "g/b.json"
    assert cfg.output_dir == tmp_path / "build"


@pytest.mark.parametrize("doc, match", [
    ({"hspec": "h.json"}, "lacks"),
    ({"base": "b", "hspec": "h", "window": [1, 3]}, "contain 0"),
    ({"base": "b", "hspec": "h", "language_depth": 0}, "depths"),
])
def test_config_rejects(tmp_path, doc, match):
    (tmp_path / "c.json").write_text(json.dumps(doc))
    with pytest.raises(ConfigError, match=match):
        ProjectConfig.load(tmp_path / "c.json")


def test_missing_group_file_is_a_config_error(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps({"base": "nope.json", "hspec": "nope.json"}))
    with pytest.raises(ConfigError):
        ProjectConfig.load(tmp_path / "c.json").load_groups()


def test_group_docs_roundtrip(z3):
    assert group_to_dict(group_from_dict(group_to_dict(z3.group))) == group_to_dict(z3.group)
    assert isinstance(group_from_dict({"type": "integer"}), IntegerGroup)
    with pytest.raises(GroupSpecError):
        group_from_dict({"type": "matrix"})
    spec = infinite_dihedral_spec()
    assert hspec_to_dict(hspec_from_dict(hspec_to_dict(spec))) == hspec_to_dict(spec)
    with pytest.raises(GroupSpecError):
        hspec_from_dict({"type": "finite_table"})


def test_structure_file_roundtrip(lamplighter, tmp_path):
    save_structure(lamplighter, tmp_path / "s.json")
    back = load_structure(tmp_path / "s.json")
    assert structure_to_dict(back) == structure_to_dict(lamplighter)


def test_structure_format_is_checked(lamplighter, tmp_path):
    doc = structure_to_dict(lamplighter)
    doc["format"] = "something-else"
    (tmp_path / "s.json").write_text(json.dumps(doc))
    with pytest.raises(ConfigError):
        load_structure(tmp_path / "s.json")
