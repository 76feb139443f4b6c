"""Tests for group, module and map files and report payloads."""

import json
from pathlib import Path

import pytest

from stmod.algebra.exactlin import PrimeField
from stmod.algebra.groups import cyclic, direct_product, from_table
from stmod.algebra.reps import cyclic_module, element_map, trivial_module
from stmod.errors import InputFileError
from stmod.io.formats import (
    group_payload,
    load_group,
    load_map,
    load_module,
    map_from_payload,
    map_payload,
    module_payload,
    read_document,
    resolve_group,
)


def _write_json(path, data):
    path.write_text(json.dumps(data))
    return path


def test_load_module_from_json(tmp_path):
    """Test a cyclic-length module file."""
    path = _write_json(tmp_path / "l2.json", {"group": "C4", "cyclic_length": 2, "name": "L2"})
    M = load_module(path)
    assert M == cyclic_module(cyclic(4), 2)
    assert M.name == "L2"
    assert M.field == PrimeField(2)


def test_load_module_from_yaml_generators(tmp_path):
    """Test a YAML module given by generator matrices over F3."""
    path = tmp_path / "l2.yaml"
    path.write_text("group:\n  cyclic: 3\ngenerators:\n  1: [[1, 0], [1, 1]]\n")
    assert load_module(path) == cyclic_module(cyclic(3), 2)


def test_load_builtin_module_with_explicit_prime(tmp_path):
    """Test the trivial module of C2×C2 with p given."""
    path = _write_json(tmp_path / "k.json", {"group": "C2xC2", "p": 2, "builtin": "trivial"})
    G = direct_product(cyclic(2), cyclic(2))
    assert load_module(path) == trivial_module(G, PrimeField(2))


def test_malformed_json_reports_line_and_column(tmp_path):
    """Test that JSON syntax errors carry a position."""
    path = tmp_path / "bad.json"
    path.write_text('{"group": "C4",\n "cyclic_length": }\n')
    with pytest.raises(InputFileError) as excinfo:
        load_module(path)
    assert excinfo.value.position is not None
    assert excinfo.value.position.startswith("2:")
    assert str(excinfo.value).startswith(f"{path}:2:")


def test_malformed_yaml_reports_position(tmp_path):
    """Test that YAML syntax errors carry a position."""
    path = tmp_path / "bad.yaml"
    path.write_text("group: C4: x\ncyclic_length: 2\n")
    with pytest.raises(InputFileError) as excinfo:
        read_document(path)
    assert excinfo.value.position is not None


def test_load_module_with_declared_dim(tmp_path):
    """Test a module file that states its dimension next to the generators."""
    path = _write_json(
        tmp_path / "l2.json",
        {"group": {"cyclic": 4}, "p": 2, "dim": 2, "generators": {"1": [[1, 0], [1, 1]]}},
    )
    assert load_module(path) == cyclic_module(cyclic(4), 2)


def test_load_klein_four_module_with_declared_dim(tmp_path):
    """Test a two-generator module over C2×C2 with its dimension given."""
    path = _write_json(
        tmp_path / "m.json",
        {
            "group": "C2xC2",
            "p": 2,
            "dim": 2,
            "generators": {"1": [[1, 0], [1, 1]], "2": [[1, 0], [0, 1]]},
        },
    )
    M = load_module(path)
    assert M.dim == 2
    assert M.act(3) == M.act(1)


def test_declared_dim_must_match_generators(tmp_path):
    """Test that a wrong dim is reported against the file."""
    path = _write_json(
        tmp_path / "m.json", {"group": "C4", "dim": 3, "generators": {"1": [[1, 0], [1, 1]]}}
    )
    with pytest.raises(InputFileError, match="do not match dim 3"):
        load_module(path)


def test_declared_dim_must_match_builtin(tmp_path):
    """Test dim against a module that is not given by matrices."""
    path = _write_json(tmp_path / "k.json", {"group": "C4", "dim": 2, "builtin": "trivial"})
    with pytest.raises(InputFileError, match="declared dim 2"):
        load_module(path)


def test_module_without_generators_takes_declared_dim(tmp_path):
    """Test a module of the trivial group with no generator matrices."""
    path = _write_json(tmp_path / "m.json", {"group": "C1", "p": 2, "dim": 2, "generators": {}})
    assert load_module(path).dim == 2


def test_module_payload_reloads_as_a_file(tmp_path):
    """Test that a written module payload carries dim and loads back unchanged."""
    M = cyclic_module(cyclic(8), 3)
    payload = module_payload(M)
    assert payload["dim"] == 3
    assert load_module(_write_json(tmp_path / "m.json", payload)) == M


def test_module_needs_exactly_one_description(tmp_path):
    """Test that a module file without an action description is refused."""
    path = _write_json(tmp_path / "empty.json", {"group": "C4"})
    with pytest.raises(InputFileError, match="exactly one of"):
        load_module(path)


def test_unknown_field_is_located(tmp_path):
    """Test that an extra key is reported by its location."""
    path = _write_json(tmp_path / "extra.json", {"group": "C4", "builtin": "trivial", "rank": 1})
    with pytest.raises(InputFileError) as excinfo:
        load_module(path)
    assert excinfo.value.position == "rank"


def test_unknown_group_shorthand(tmp_path):
    """Test that an unknown group name is reported against the file."""
    path = _write_json(tmp_path / "q8.json", {"group": "Q8", "builtin": "trivial"})
    with pytest.raises(InputFileError, match="unknown group shorthand"):
        load_module(path)


def test_missing_file():
    """Test that an unreadable path is an input error."""
    with pytest.raises(InputFileError, match="cannot read file"):
        read_document(Path("/nonexistent/group.json"))


def test_load_group_table_and_product(tmp_path):
    """Test table and product group files."""
    table = _write_json(tmp_path / "c2.json", {"name": "C2", "table": [[0, 1], [1, 0]]})
    assert load_group(table) == cyclic(2)
    product = _write_json(tmp_path / "v4.json", {"product": [{"cyclic": 2}, "C2"]})
    assert load_group(product) == direct_product(cyclic(2), cyclic(2))


def test_group_order_must_match_table(tmp_path):
    """Test the declared order against the table size."""
    path = _write_json(tmp_path / "g.json", {"name": "X", "order": 3, "table": [[0, 1], [1, 0]]})
    with pytest.raises(InputFileError, match="does not match"):
        load_group(path)


def test_group_file_with_bad_table(tmp_path):
    """Test that table validation errors are tied to the file."""
    path = _write_json(tmp_path / "g.json", {"name": "X", "table": [[0, 1], [1, 1]]})
    with pytest.raises(InputFileError, match="Latin square"):
        load_group(path)


def test_resolve_group_prefers_shorthand(tmp_path):
    """Test shorthand resolution and the file fallback."""
    assert resolve_group("CpxCp:3") == direct_product(cyclic(3), cyclic(3))
    path = _write_json(tmp_path / "c3.json", {"cyclic": 3})
    assert resolve_group(str(path)) == cyclic(3)


def test_load_map_with_relative_module_paths(tmp_path):
    """Test a map file whose endpoints are module files next to it."""
    _write_json(tmp_path / "l2.json", {"group": "C4", "cyclic_length": 2})
    path = _write_json(
        tmp_path / "phi.json",
        {"source": "l2.json", "target": "l2.json", "matrix": [[0, 0], [1, 0]]},
    )
    f = load_map(path)
    assert f == element_map(cyclic_module(cyclic(4), 2), 1)


def test_load_map_rejects_non_equivariant_matrix(tmp_path):
    """Test that a map file must describe a kG-linear map."""
    module = {"group": "C4", "cyclic_length": 2}
    path = _write_json(
        tmp_path / "bad.json", {"source": module, "target": module, "matrix": [[1, 1], [0, 0]]}
    )
    with pytest.raises(InputFileError, match="intertwine"):
        load_map(path)


def test_payloads_reload():
    """Test that a map witness can be rebuilt from its report payload."""
    f = element_map(cyclic_module(cyclic(8), 3), 1)
    payload = map_payload(f)
    assert payload["source"]["group"] == "C8"
    assert payload["source"]["generators"].keys() == {"1"}
    assert map_from_payload(json.loads(json.dumps(payload))) == f


def test_group_payload_falls_back_to_table():
    """Test that a group whose name is not shorthand is written as a table."""
    G = from_table("Z2", [[0, 1], [1, 0]])
    assert group_payload(G) == {"name": "Z2", "order": 2, "table": [[0, 1], [1, 0]]}
    assert module_payload(trivial_module(G, PrimeField(2)))["group"]["name"] == "Z2"


def test_ragged_group_table_is_an_input_error(tmp_path):
    """Test that rows of different lengths are reported against the file."""
    path = _write_json(tmp_path / "g.json", {"name": "X", "table": [[0, 1], [1]]})
    with pytest.raises(InputFileError, match="ragged"):
        load_group(path)


def test_oversized_group_file_is_refused(tmp_path):
    """Test the order limit for cyclic and product group files."""
    with pytest.raises(InputFileError, match="exceeds"):
        load_group(_write_json(tmp_path / "c.json", {"cyclic": 40000}))
    with pytest.raises(InputFileError, match="exceeds"):
        load_group(_write_json(tmp_path / "p.json", {"product": ["C16", "C16"]}))


def test_invalid_utf8_is_an_input_error(tmp_path):
    """Test that undecodable bytes are reported, not raised."""
    path = tmp_path / "m.json"
    path.write_bytes(b'{"group": "C4", "name": "\xff\xfe"}')
    with pytest.raises(InputFileError, match="UTF-8"):
        load_module(path)


def test_huge_matrix_entries_are_reduced(tmp_path):
    """Test that entries beyond 64 bits are read modulo p."""
    path = _write_json(
        tmp_path / "m.json", {"group": "C4", "generators": {"1": [[1, 0], [10**29 + 1, 1]]}}
    )
    # 10^29 + 1 is odd
    assert load_module(path) == cyclic_module(cyclic(4), 2)


def test_huge_group_table_entry_is_an_input_error(tmp_path):
    """Test that a table entry beyond 64 bits is reported against the file."""
    path = _write_json(tmp_path / "g.json", {"name": "X", "table": [[0, 1], [1, 10**29]]})
    with pytest.raises(InputFileError, match="must lie in"):
        load_group(path)
