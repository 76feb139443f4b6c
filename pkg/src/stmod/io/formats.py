"""Group, module and map files (JSON or YAML) and their in-report payloads.

Group spec: a shorthand string (``"C4"``, ``"C2xC2"``, ``"CpxCp:3"``), a table
``{"name", "order", "table"}``, ``{"cyclic": n}`` or ``{"product": [spec, spec]}``.

Module spec: ``{"group": <group spec>, "p": <prime, optional>, "dim": <optional>,
"name": ...}`` plus exactly one of ``generators`` (element index → matrix), ``action`` (one
matrix per element), ``jordan`` (block sizes, cyclic groups), ``cyclic_length``
or ``builtin`` (``"trivial"`` / ``"regular"``).

Map spec: ``{"source": <module spec or path>, "target": ..., "matrix": [[...]]}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal, Union

import structlog
import yaml
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeInt,
    PositiveInt,
    ValidationError,
    model_validator,
)

from stmod.algebra.exactlin import Matrix, PrimeField
from stmod.algebra.groups import (
    MAX_GROUP_ORDER,
    Group,
    cyclic,
    direct_product,
    from_table,
    parse_group_shorthand,
    prime_power,
)
from stmod.algebra.reps import (
    Module,
    ModuleMap,
    cyclic_module,
    module_from_generators,
    module_from_jordan_type,
    regular_module,
    trivial_module,
)
from stmod.errors import GroupTableError, InputFileError, ModuleValidationError, StmodError

logger = structlog.get_logger(__name__)

MatrixRows = list[list[int]]


class GroupTableSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "G"
    order: PositiveInt | None = None
    table: MatrixRows

    @model_validator(mode="after")
    def _order_matches(self) -> GroupTableSpec:
        if self.order is not None and self.order != len(self.table):
            raise ValueError(
                f"order {self.order} does not match a table with {len(self.table)} rows"
            )
        return self


class CyclicSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cyclic: PositiveInt


class ProductSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    product: list[GroupSpec] = Field(min_length=2)


GroupSpec = Union[str, CyclicSpec, ProductSpec, GroupTableSpec]
ProductSpec.model_rebuild()


class ModuleSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    group: GroupSpec
    p: int | None = None
    dim: NonNegativeInt | None = None
    name: str = ""
    generators: dict[int, MatrixRows] | None = None
    action: list[MatrixRows] | None = None
    jordan: list[PositiveInt] | None = None
    cyclic_length: PositiveInt | None = None
    builtin: Literal["trivial", "regular"] | None = None

    @model_validator(mode="after")
    def _exactly_one_description(self) -> ModuleSpec:
        given = [
            key
            for key in ("generators", "action", "jordan", "cyclic_length", "builtin")
            if getattr(self, key) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                "exactly one of generators, action, jordan, cyclic_length, builtin is required"
                f" (got {given or 'none'})"
            )
        return self


class MapSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: Union[str, ModuleSpec]
    target: Union[str, ModuleSpec]
    matrix: MatrixRows


# Building objects from specs


def _check_order(order: int) -> None:
    if order > MAX_GROUP_ORDER:
        raise GroupTableError(f"group order {order} exceeds {MAX_GROUP_ORDER}")


def build_group(spec: GroupSpec) -> Group:
    if isinstance(spec, str):
        group = parse_group_shorthand(spec)
        if group is None:
            raise StmodError(f"unknown group shorthand {spec!r}")
        return group
    if isinstance(spec, CyclicSpec):
        _check_order(spec.cyclic)
        return cyclic(spec.cyclic)
    if isinstance(spec, ProductSpec):
        group = build_group(spec.product[0])
        for factor in spec.product[1:]:
            other = build_group(factor)
            _check_order(group.order * other.order)
            group = direct_product(group, other)
        return group
    return from_table(spec.name, spec.table)


def _field_for(group: Group, p: int | None) -> PrimeField:
    if p is not None:
        return PrimeField(p)
    pp = prime_power(group.order)
    if pp is None:
        raise StmodError(f"cannot infer the characteristic for {group.name}; give 'p'")
    return PrimeField(pp[0])


def _matrix(F: PrimeField, rows: MatrixRows, size: int) -> Matrix:
    return Matrix.from_rows(F, rows, cols=size)


def build_module(spec: ModuleSpec) -> Module:
    G = build_group(spec.group)
    F = _field_for(G, spec.p)
    if spec.builtin == "trivial":
        M = trivial_module(G, F)
    elif spec.builtin == "regular":
        M = regular_module(G, F)
    elif spec.cyclic_length is not None:
        M = cyclic_module(G, spec.cyclic_length, F)
    elif spec.jordan is not None:
        M = module_from_jordan_type(G, F, spec.jordan)
    elif spec.action is not None:
        size = len(spec.action[0]) if spec.action else (spec.dim or 0)
        M = Module(G, F, tuple(_matrix(F, rows, size) for rows in spec.action))
    else:
        assert spec.generators is not None
        M = module_from_generators(
            G,
            F,
            {g: _matrix(F, rows, len(rows)) for g, rows in spec.generators.items()},
            dim=spec.dim,
        )
    if spec.dim is not None and M.dim != spec.dim:
        raise ModuleValidationError(f"declared dim {spec.dim} but the module has dim {M.dim}")
    return M.with_name(spec.name) if spec.name else M


def build_map(spec: MapSpec, base_dir: Path | None = None) -> ModuleMap:
    source = _module_ref(spec.source, base_dir)
    target = _module_ref(spec.target, base_dir)
    mat = Matrix.from_rows(source.field, spec.matrix, cols=source.dim)
    return ModuleMap(source, target, mat)


def _module_ref(ref: str | ModuleSpec, base_dir: Path | None) -> Module:
    if isinstance(ref, ModuleSpec):
        return build_module(ref)
    path = Path(ref)
    if base_dir is not None and not path.is_absolute():
        path = base_dir / path
    return load_module(path)


# Reading files


def read_document(path: Path) -> Any:
    """Parse a JSON or YAML (``.yaml``/``.yml``) document.

    Raises:
        InputFileError: with ``line:col`` when the syntax is malformed
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputFileError(str(path), f"cannot read file: {e.strerror or e}") from e
    except UnicodeDecodeError as e:
        raise InputFileError(str(path), f"not valid UTF-8 at byte {e.start}") from e
    if path.suffix.lower() in {".yaml", ".yml"}:
        try:
            return yaml.safe_load(text)
        except yaml.YAMLError as e:
            mark = getattr(e, "problem_mark", None)
            position = f"{mark.line + 1}:{mark.column + 1}" if mark is not None else None
            raise InputFileError(str(path), str(getattr(e, "problem", None) or e), position) from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputFileError(str(path), e.msg, f"{e.lineno}:{e.colno}") from e


def _validation_position(error: ValidationError) -> tuple[str, str]:
    first = error.errors()[0]
    loc = ".".join(str(part) for part in first["loc"]) or "$"
    return loc, first["msg"]


def _load(path: Path, model: type[BaseModel]) -> BaseModel:
    data = read_document(path)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        loc, msg = _validation_position(e)
        raise InputFileError(str(path), msg, loc) from e


def load_group(path: Path) -> Group:
    data = read_document(path)
    try:
        if isinstance(data, str):
            return build_group(data)
        if isinstance(data, dict) and "cyclic" in data:
            return build_group(CyclicSpec.model_validate(data))
        if isinstance(data, dict) and "product" in data:
            return build_group(ProductSpec.model_validate(data))
        return build_group(GroupTableSpec.model_validate(data))
    except ValidationError as e:
        loc, msg = _validation_position(e)
        raise InputFileError(str(path), msg, loc) from e
    except (ValueError, OverflowError) as e:
        raise InputFileError(str(path), str(e)) from e


def resolve_group(value: str) -> Group:
    """A group from CLI input: shorthand first, then a file path."""
    try:
        group = parse_group_shorthand(value)
    except StmodError as e:
        raise InputFileError(value, str(e)) from e
    if group is not None:
        return group
    return load_group(Path(value))


def load_module(path: Path) -> Module:
    spec = _load(path, ModuleSpec)
    assert isinstance(spec, ModuleSpec)
    try:
        M = build_module(spec)
    except (ValueError, OverflowError) as e:
        raise InputFileError(str(path), str(e)) from e
    logger.debug("module_loaded", path=str(path), dim=M.dim)
    return M


def load_map(path: Path) -> ModuleMap:
    spec = _load(path, MapSpec)
    assert isinstance(spec, MapSpec)
    try:
        return build_map(spec, base_dir=path.parent)
    except InputFileError:
        raise
    except (ValueError, OverflowError) as e:
        raise InputFileError(str(path), str(e)) from e


# Serializing for reports and witnesses


def group_payload(G: Group) -> str | dict[str, Any]:
    """Shorthand when the name reproduces the exact table, else the full table."""
    try:
        candidate = parse_group_shorthand(G.name)
    except StmodError:
        candidate = None
    if candidate is not None and candidate == G:
        return G.name
    return {"name": G.name, "order": G.order, "table": G.table.tolist()}


def module_payload(M: Module) -> dict[str, Any]:
    payload: dict[str, Any] = {"group": group_payload(M.group), "p": M.field.p, "dim": M.dim}
    if M.name:
        payload["name"] = M.name
    payload["generators"] = {str(g): M.act(g).to_rows() for g in M.group.generators}
    return payload


def map_payload(f: ModuleMap) -> dict[str, Any]:
    return {
        "source": module_payload(f.source),
        "target": module_payload(f.target),
        "matrix": f.mat.to_rows(),
    }


def map_from_payload(payload: dict[str, Any]) -> ModuleMap:
    """Rebuild a map written by :func:`map_payload` (replaying a report witness)."""
    return build_map(MapSpec.model_validate(payload))
