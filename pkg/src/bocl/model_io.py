"""Versioned JSON interchange for models, object models, and reports.

Schema bocl-model/1::

    {"schemaVersion": "bocl-model/1", "name": ...,
     "classes": [{"name", "attributes": [{"name", "type"}]}],
     "associations": [{"name", "ends": [{"role", "target",
                       "multiplicity": {"lower": int, "upper": int|"*"}}]}],
     "constraints": [{"name", "context", "expression", "language"?}]}

Schema bocl-objects/1::

    {"schemaVersion": "bocl-objects/1", "name": ...,
     "objects": [{"name", "class", "slots": {attr: value}}],
     "links": [{"association", "ends": [{"role", "object"}], "name"?}]}

Attribute types are "int", "real", "str", "bool", "date"; dates are
"YYYY-MM-DD" strings. Unknown keys are rejected.
"""

from __future__ import annotations

import datetime
import json
import re
from enum import Enum
from pathlib import Path
from typing import IO

from .evaluator import EvaluationReport, VerdictKind
from .model import (
    AssociationEnd,
    Attribute,
    BinaryAssociation,
    ClassDef,
    ConstraintDef,
    LinkInstance,
    LiteralValue,
    ModelDiagnostic,
    Multiplicity,
    ObjectInstance,
    ObjectModel,
    PrimitiveType,
    Severity,
    StructuralModel,
    validate_conformance,
    validate_structural,
)

MODEL_SCHEMA_VERSION = "bocl-model/1"
OBJECTS_SCHEMA_VERSION = "bocl-objects/1"

_DATE_RE = re.compile(r"\d{4}-\d{2}-\d{2}\Z")


class IoErrorKind(Enum):
    NOT_FOUND = "NotFound"
    MALFORMED = "Malformed"
    SCHEMA_VERSION = "SchemaVersion"
    VALIDATION = "Validation"
    CONFORMANCE = "Conformance"


class IoError(Exception):
    def __init__(
        self,
        kind: IoErrorKind,
        message: str,
        diagnostics: tuple[ModelDiagnostic, ...] = (),
        line: int | None = None,
        col: int | None = None,
    ):
        position = f" at line {line}, column {col}" if line is not None else ""
        super().__init__(f"{kind.value}: {message}{position}")
        self.kind = kind
        self.diagnostics = diagnostics
        self.line = line
        self.col = col


class ReportFormat(Enum):
    TEXT = "text"
    JSON = "json"


# ---------- Shared loader helpers ----------

def _load_document(path: str | Path, expected_version: str) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except FileNotFoundError:
        raise IoError(IoErrorKind.NOT_FOUND, f"no such file: {path}") from None
    except OSError as error:
        raise IoError(IoErrorKind.NOT_FOUND, f"cannot read {path}: {error}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as error:
        raise IoError(
            IoErrorKind.MALFORMED, error.msg, line=error.lineno, col=error.colno
        ) from None
    if not isinstance(doc, dict):
        raise IoError(IoErrorKind.MALFORMED, "document root must be an object")
    version = doc.get("schemaVersion")
    if version != expected_version:
        raise IoError(
            IoErrorKind.SCHEMA_VERSION,
            f"expected schemaVersion {expected_version!r}, found {version!r}",
        )
    return doc


def _malformed(message: str) -> IoError:
    return IoError(IoErrorKind.MALFORMED, message)


def _check_keys(record: dict, required: set[str], optional: set[str], where: str) -> None:
    if not isinstance(record, dict):
        raise _malformed(f"{where} must be an object")
    keys = set(record)
    missing = required - keys
    if missing:
        raise _malformed(f"{where} is missing key(s) {sorted(missing)}")
    unknown = keys - required - optional
    if unknown:
        raise _malformed(f"{where} has unknown key(s) {sorted(unknown)}")


def _str_field(record: dict, key: str, where: str) -> str:
    value = record[key]
    if not isinstance(value, str):
        raise _malformed(f"{where}.{key} must be a string")
    return value


def _list_field(record: dict, key: str, where: str) -> list:
    value = record.get(key, [])
    if not isinstance(value, list):
        raise _malformed(f"{where}.{key} must be an array")
    return value


# ---------- Structural model ----------

def _multiplicity_from_json(raw: object, where: str) -> Multiplicity:
    if not isinstance(raw, dict):
        raise _malformed(f"{where} must be an object")
    _check_keys(raw, {"lower", "upper"}, set(), where)
    lower = raw["lower"]
    upper = raw["upper"]
    if not isinstance(lower, int) or isinstance(lower, bool):
        raise _malformed(f"{where}.lower must be an integer")
    if upper == "*":
        upper = None
    elif not isinstance(upper, int) or isinstance(upper, bool):
        raise _malformed(f'{where}.upper must be an integer or "*"')
    return Multiplicity(lower, upper)


def structural_from_document(doc: dict) -> StructuralModel:
    """Build a StructuralModel from a parsed bocl-model/1 document."""
    _check_keys(
        doc,
        {"schemaVersion", "name"},
        {"classes", "associations", "constraints"},
        "model document",
    )
    name = _str_field(doc, "name", "model document")

    classes = []
    for i, raw in enumerate(_list_field(doc, "classes", "model document")):
        where = f"classes[{i}]"
        _check_keys(raw, {"name"}, {"attributes"}, where)
        attrs = []
        for j, araw in enumerate(_list_field(raw, "attributes", where)):
            awhere = f"{where}.attributes[{j}]"
            _check_keys(araw, {"name", "type"}, set(), awhere)
            type_name = _str_field(araw, "type", awhere)
            try:
                ptype = PrimitiveType(type_name)
            except ValueError:
                raise _malformed(f"{awhere}.type: unknown type {type_name!r}") from None
            attrs.append(Attribute(_str_field(araw, "name", awhere), ptype))
        classes.append(ClassDef(_str_field(raw, "name", where), tuple(attrs)))

    by_name = {cls.name: cls for cls in classes}
    diagnostics: list[ModelDiagnostic] = []

    associations = []
    for i, raw in enumerate(_list_field(doc, "associations", "model document")):
        where = f"associations[{i}]"
        _check_keys(raw, {"name", "ends"}, set(), where)
        ends_raw = raw["ends"]
        if not isinstance(ends_raw, list) or len(ends_raw) != 2:
            raise _malformed(f"{where}.ends must be an array of exactly two ends")
        ends = []
        for j, eraw in enumerate(ends_raw):
            ewhere = f"{where}.ends[{j}]"
            _check_keys(eraw, {"role", "target", "multiplicity"}, set(), ewhere)
            target_name = _str_field(eraw, "target", ewhere)
            target = by_name.get(target_name)
            if target is None:
                diagnostics.append(
                    ModelDiagnostic(
                        Severity.ERROR, ewhere, f"unknown class {target_name!r}"
                    )
                )
                target = ClassDef(target_name)
            ends.append(
                AssociationEnd(
                    _str_field(eraw, "role", ewhere),
                    target,
                    _multiplicity_from_json(eraw["multiplicity"], f"{ewhere}.multiplicity"),
                )
            )
        associations.append(
            BinaryAssociation(_str_field(raw, "name", where), ends[0], ends[1])
        )

    constraints = []
    for i, raw in enumerate(_list_field(doc, "constraints", "model document")):
        where = f"constraints[{i}]"
        _check_keys(raw, {"name", "context", "expression"}, {"language"}, where)
        context_name = _str_field(raw, "context", where)
        context = by_name.get(context_name)
        if context is None:
            diagnostics.append(
                ModelDiagnostic(
                    Severity.ERROR, where, f"unknown context class {context_name!r}"
                )
            )
            context = ClassDef(context_name)
        language = raw.get("language", "OCL")
        if not isinstance(language, str):
            raise _malformed(f"{where}.language must be a string")
        constraints.append(
            ConstraintDef(
                _str_field(raw, "name", where),
                context,
                _str_field(raw, "expression", where),
                language,
            )
        )

    if diagnostics:
        raise IoError(
            IoErrorKind.VALIDATION,
            "; ".join(str(d) for d in diagnostics),
            tuple(diagnostics),
        )
    return StructuralModel(name, tuple(classes), tuple(associations), tuple(constraints))


def structural_to_document(model: StructuralModel) -> dict:
    return {
        "schemaVersion": MODEL_SCHEMA_VERSION,
        "name": model.name,
        "classes": [
            {
                "name": cls.name,
                "attributes": [
                    {"name": a.name, "type": a.type.value} for a in cls.attributes
                ],
            }
            for cls in model.classes
        ],
        "associations": [
            {
                "name": assoc.name,
                "ends": [
                    {
                        "role": end.role,
                        "target": end.target.name,
                        "multiplicity": {
                            "lower": end.multiplicity.lower,
                            "upper": "*" if end.multiplicity.upper is None else end.multiplicity.upper,
                        },
                    }
                    for end in assoc.ends()
                ],
            }
            for assoc in model.associations
        ],
        "constraints": [
            {
                "name": con.name,
                "context": con.context_class.name,
                "expression": con.expression,
                "language": con.language,
            }
            for con in model.constraints
        ],
    }


def load_structural(path: str | Path) -> StructuralModel:
    """Load and validate a structural model; raises IoError on any failure."""
    doc = _load_document(path, MODEL_SCHEMA_VERSION)
    model = structural_from_document(doc)
    diagnostics = validate_structural(model)
    errors = tuple(d for d in diagnostics if d.severity is Severity.ERROR)
    if errors:
        raise IoError(
            IoErrorKind.VALIDATION, "; ".join(str(d) for d in errors), errors
        )
    return model


def save_structural(model: StructuralModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(structural_to_document(model), indent=2) + "\n", encoding="utf-8"
    )


# ---------- Object model ----------

def _literal_from_json(value: object, attr: Attribute, where: str) -> LiteralValue:
    kind = attr.type
    if kind is PrimitiveType.BOOL and isinstance(value, bool):
        return LiteralValue(kind, value)
    if kind is PrimitiveType.INT and isinstance(value, int) and not isinstance(value, bool):
        return LiteralValue(kind, value)
    if kind is PrimitiveType.REAL and isinstance(value, (int, float)) and not isinstance(value, bool):
        return LiteralValue(kind, float(value))
    if kind is PrimitiveType.STR and isinstance(value, str):
        return LiteralValue(kind, value)
    if kind is PrimitiveType.DATE and isinstance(value, str):
        if not _DATE_RE.match(value):
            raise IoError(
                IoErrorKind.CONFORMANCE,
                f'{where}: date must be "YYYY-MM-DD", found {value!r}',
            )
        try:
            return LiteralValue(kind, datetime.date.fromisoformat(value))
        except ValueError as error:
            raise IoError(IoErrorKind.CONFORMANCE, f"{where}: {error}") from None
    raise IoError(
        IoErrorKind.CONFORMANCE,
        f"{where}: slot type mismatch: attribute '{attr.name}' is {kind.value}, "
        f"value {value!r} is not",
    )


def objects_from_document(doc: dict, model: StructuralModel) -> ObjectModel:
    """Build an ObjectModel from a parsed bocl-objects/1 document.

    Raises IoError Conformance for references that do not resolve against
    the structural model; full conformance validation is the caller's job.
    """
    _check_keys(doc, {"schemaVersion", "name"}, {"objects", "links"}, "objects document")
    name = _str_field(doc, "name", "objects document")

    objects = []
    for i, raw in enumerate(_list_field(doc, "objects", "objects document")):
        where = f"objects[{i}]"
        _check_keys(raw, {"name", "class"}, {"slots"}, where)
        obj_name = _str_field(raw, "name", where)
        class_name = _str_field(raw, "class", where)
        cls = model.class_named(class_name)
        if cls is None:
            raise IoError(
                IoErrorKind.CONFORMANCE, f"{where}: unknown class {class_name!r}"
            )
        slots_raw = raw.get("slots", {})
        if not isinstance(slots_raw, dict):
            raise _malformed(f"{where}.slots must be an object")
        slots = {}
        for attr_name, value in slots_raw.items():
            swhere = f"{where}.slots[{attr_name}]"
            attr = cls.attribute_named(attr_name)
            if attr is None:
                raise IoError(
                    IoErrorKind.CONFORMANCE,
                    f"{swhere}: class '{class_name}' has no attribute '{attr_name}'",
                )
            slots[attr_name] = _literal_from_json(value, attr, swhere)
        objects.append(ObjectInstance(obj_name, cls, slots))

    obj_by_name = {obj.name: obj for obj in objects}

    links = []
    for i, raw in enumerate(_list_field(doc, "links", "objects document")):
        where = f"links[{i}]"
        _check_keys(raw, {"association", "ends"}, {"name"}, where)
        assoc_name = _str_field(raw, "association", where)
        assoc = None
        for candidate in model.associations:
            if candidate.name == assoc_name:
                assoc = candidate
                break
        if assoc is None:
            raise IoError(
                IoErrorKind.CONFORMANCE, f"{where}: unknown association {assoc_name!r}"
            )
        ends_raw = raw["ends"]
        if not isinstance(ends_raw, list) or len(ends_raw) != 2:
            raise _malformed(f"{where}.ends must be an array of exactly two ends")
        by_role: dict[str, ObjectInstance] = {}
        for j, eraw in enumerate(ends_raw):
            ewhere = f"{where}.ends[{j}]"
            _check_keys(eraw, {"role", "object"}, set(), ewhere)
            role = _str_field(eraw, "role", ewhere)
            target_name = _str_field(eraw, "object", ewhere)
            if role not in (assoc.end1.role, assoc.end2.role):
                raise IoError(
                    IoErrorKind.CONFORMANCE,
                    f"{ewhere}: association '{assoc_name}' has no role {role!r}",
                )
            if role in by_role:
                raise IoError(
                    IoErrorKind.CONFORMANCE, f"{ewhere}: duplicate role {role!r}"
                )
            target = obj_by_name.get(target_name)
            if target is None:
                raise IoError(
                    IoErrorKind.CONFORMANCE,
                    f"{ewhere}: unknown object {target_name!r}",
                )
            by_role[role] = target
        if set(by_role) != {assoc.end1.role, assoc.end2.role}:
            raise IoError(
                IoErrorKind.CONFORMANCE,
                f"{where}: link must name both roles of '{assoc_name}'",
            )
        link_name = raw.get("name", f"{assoc_name}_{i}")
        if not isinstance(link_name, str):
            raise _malformed(f"{where}.name must be a string")
        links.append(
            LinkInstance(
                link_name, assoc, by_role[assoc.end1.role], by_role[assoc.end2.role]
            )
        )

    return ObjectModel(name, tuple(objects), tuple(links))


def objects_to_document(objects: ObjectModel) -> dict:
    def slot_value(literal: LiteralValue) -> object:
        if literal.kind is PrimitiveType.DATE:
            return literal.value.isoformat()
        return literal.value

    return {
        "schemaVersion": OBJECTS_SCHEMA_VERSION,
        "name": objects.name,
        "objects": [
            {
                "name": obj.name,
                "class": obj.classifier.name,
                "slots": {key: slot_value(val) for key, val in sorted(obj.slots.items())},
            }
            for obj in objects.objects
        ],
        "links": [
            {
                "name": link.name,
                "association": link.association.name,
                "ends": [
                    {"role": link.association.end1.role, "object": link.end1_object.name},
                    {"role": link.association.end2.role, "object": link.end2_object.name},
                ],
            }
            for link in objects.links
        ],
    }


def load_objects(
    path: str | Path, model: StructuralModel
) -> tuple[ObjectModel, list[ModelDiagnostic]]:
    """Load an object model and validate conformance against the model.

    Error diagnostics abort with IoError Conformance; warnings (for
    multiplicity counts) are returned with the result.
    """
    doc = _load_document(path, OBJECTS_SCHEMA_VERSION)
    objects = objects_from_document(doc, model)
    diagnostics = validate_conformance(objects, model)
    errors = tuple(d for d in diagnostics if d.severity is Severity.ERROR)
    if errors:
        raise IoError(
            IoErrorKind.CONFORMANCE, "; ".join(str(d) for d in errors), errors
        )
    warnings = [d for d in diagnostics if d.severity is Severity.WARNING]
    return objects, warnings


def save_objects(objects: ObjectModel, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(objects_to_document(objects), indent=2) + "\n", encoding="utf-8"
    )


# ---------- Reports ----------

def _verdict_text(verdict) -> str:
    if verdict.overall is VerdictKind.ERROR:
        return f"Error({verdict.error_message})"
    return verdict.overall.value


def report_to_document(report: EvaluationReport) -> dict:
    results = []
    for result in report.results:
        verdict = result.verdict
        entry = {
            "name": verdict.constraint_name,
            "expression": result.expression,
            "overall": verdict.overall.value,
            "perInstance": [
                {"object": obj, "holds": holds} for obj, holds in verdict.per_instance
            ],
        }
        if verdict.overall is VerdictKind.ERROR:
            entry["error"] = verdict.error_message
        results.append(entry)
    return {"results": results}


def write_report(report: EvaluationReport, format: ReportFormat, sink: IO[str]) -> None:
    """Write the report: one 'Invariant:<text>:<verdict>' line per
    constraint in text mode, a {"results": [...]} document in JSON mode."""
    if format is ReportFormat.TEXT:
        for result in report.results:
            sink.write(f"Invariant:{result.expression}:{_verdict_text(result.verdict)}\n")
    else:
        json.dump(report_to_document(report), sink, indent=2)
        sink.write("\n")
