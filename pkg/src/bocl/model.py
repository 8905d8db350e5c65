"""Structural models, object models, and conformance validation."""

from __future__ import annotations

import datetime
import re
from dataclasses import dataclass, field
from enum import Enum

IDENTIFIER_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1


def is_identifier(name: str) -> bool:
    return bool(IDENTIFIER_RE.match(name))


# ---------- Structural model ----------

class PrimitiveType(Enum):
    INT = "int"
    REAL = "real"
    STR = "str"
    BOOL = "bool"
    DATE = "date"


@dataclass(frozen=True)
class Attribute:
    name: str
    type: PrimitiveType


@dataclass(frozen=True)
class ClassDef:
    name: str
    attributes: tuple[Attribute, ...] = ()

    def __post_init__(self) -> None:
        ordered = tuple(sorted(self.attributes, key=lambda a: a.name))
        object.__setattr__(self, "attributes", ordered)

    def attribute_named(self, name: str) -> Attribute | None:
        for attr in self.attributes:
            if attr.name == name:
                return attr
        return None


@dataclass(frozen=True)
class Multiplicity:
    """Allowed link count at an association end; upper None means unbounded."""

    lower: int
    upper: int | None

    def __str__(self) -> str:
        upper = "*" if self.upper is None else str(self.upper)
        return f"{self.lower}..{upper}"


@dataclass(frozen=True)
class AssociationEnd:
    role: str
    target: ClassDef
    multiplicity: Multiplicity


@dataclass(frozen=True)
class BinaryAssociation:
    name: str
    end1: AssociationEnd
    end2: AssociationEnd

    def ends(self) -> tuple[AssociationEnd, AssociationEnd]:
        return (self.end1, self.end2)


@dataclass(frozen=True)
class ConstraintDef:
    name: str
    context_class: ClassDef
    expression: str
    language: str = "OCL"


@dataclass(frozen=True)
class StructuralModel:
    name: str
    classes: tuple[ClassDef, ...] = ()
    associations: tuple[BinaryAssociation, ...] = ()
    constraints: tuple[ConstraintDef, ...] = ()

    def __post_init__(self) -> None:
        # Classes and associations are sets; keep them in a canonical order.
        # Constraint order is declaration order and is preserved.
        object.__setattr__(
            self, "classes", tuple(sorted(self.classes, key=lambda c: c.name))
        )
        object.__setattr__(
            self,
            "associations",
            tuple(sorted(self.associations, key=lambda a: a.name)),
        )
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def class_named(self, name: str) -> ClassDef | None:
        for cls in self.classes:
            if cls.name == name:
                return cls
        return None

    def navigable_ends(
        self, cls: ClassDef
    ) -> dict[str, tuple[BinaryAssociation, AssociationEnd]]:
        """Role name -> (association, far end) for every end reachable from cls."""
        ends: dict[str, tuple[BinaryAssociation, AssociationEnd]] = {}
        for assoc in self.associations:
            for end, opposite in ((assoc.end1, assoc.end2), (assoc.end2, assoc.end1)):
                if opposite.target.name == cls.name:
                    ends[end.role] = (assoc, end)
        return ends


# ---------- Object model ----------

@dataclass(frozen=True)
class LiteralValue:
    """A typed scalar stored in an object slot."""

    kind: PrimitiveType
    value: int | float | str | bool | datetime.date

    def __post_init__(self) -> None:
        v = self.value
        if self.kind is PrimitiveType.BOOL:
            ok = isinstance(v, bool)
        elif self.kind is PrimitiveType.INT:
            ok = isinstance(v, int) and not isinstance(v, bool)
            if ok and not (INT64_MIN <= v <= INT64_MAX):
                raise ValueError(f"integer literal out of 64-bit range: {v}")
        elif self.kind is PrimitiveType.REAL:
            ok = isinstance(v, float)
        elif self.kind is PrimitiveType.STR:
            ok = isinstance(v, str)
        else:
            ok = isinstance(v, datetime.date) and not isinstance(v, datetime.datetime)
        if not ok:
            raise ValueError(f"payload {v!r} does not match kind {self.kind.value}")


@dataclass(frozen=True)
class ObjectInstance:
    name: str
    classifier: ClassDef
    slots: dict[str, LiteralValue] = field(default_factory=dict)


@dataclass(frozen=True)
class LinkInstance:
    name: str
    association: BinaryAssociation
    end1_object: ObjectInstance
    end2_object: ObjectInstance


@dataclass(frozen=True)
class ObjectModel:
    name: str
    objects: tuple[ObjectInstance, ...] = ()
    links: tuple[LinkInstance, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(
            self, "objects", tuple(sorted(self.objects, key=lambda o: o.name))
        )
        link_key = lambda l: (l.association.name, l.end1_object.name, l.end2_object.name, l.name)
        object.__setattr__(self, "links", tuple(sorted(self.links, key=link_key)))

    def object_named(self, name: str) -> ObjectInstance | None:
        for obj in self.objects:
            if obj.name == name:
                return obj
        return None


# ---------- Diagnostics ----------

class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ModelDiagnostic:
    severity: Severity
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity.value}: {self.path}: {self.message}"


class UnknownRoleError(Exception):
    def __init__(self, role: str, class_name: str):
        super().__init__(f"unknown role '{role}' navigable from class '{class_name}'")
        self.role = role
        self.class_name = class_name


def _error(path: str, message: str) -> ModelDiagnostic:
    return ModelDiagnostic(Severity.ERROR, path, message)


def _warning(path: str, message: str) -> ModelDiagnostic:
    return ModelDiagnostic(Severity.WARNING, path, message)


# ---------- Validation ----------

def validate_structural(model: StructuralModel) -> list[ModelDiagnostic]:
    """Check the structural model's own invariants.

    Returns an empty list exactly when the model is well formed; every
    finding here is Error severity.
    """
    diags: list[ModelDiagnostic] = []

    seen_classes: set[str] = set()
    for cls in model.classes:
        path = f"classes[{cls.name}]"
        if cls.name in seen_classes:
            diags.append(_error(path, f"duplicate class name '{cls.name}'"))
        seen_classes.add(cls.name)
        if not is_identifier(cls.name):
            diags.append(_error(path, f"class name '{cls.name}' is not an identifier"))
        seen_attrs: set[str] = set()
        for attr in cls.attributes:
            apath = f"{path}.attributes[{attr.name}]"
            if attr.name in seen_attrs:
                diags.append(_error(apath, f"duplicate attribute name '{attr.name}'"))
            seen_attrs.add(attr.name)
            if not is_identifier(attr.name):
                diags.append(
                    _error(apath, f"attribute name '{attr.name}' is not an identifier")
                )

    seen_assocs: set[str] = set()
    for assoc in model.associations:
        path = f"associations[{assoc.name}]"
        if assoc.name in seen_assocs:
            diags.append(_error(path, f"duplicate association name '{assoc.name}'"))
        seen_assocs.add(assoc.name)
        if not is_identifier(assoc.name):
            diags.append(
                _error(path, f"association name '{assoc.name}' is not an identifier")
            )
        for label, end in (("end1", assoc.end1), ("end2", assoc.end2)):
            epath = f"{path}.{label}"
            if not is_identifier(end.role):
                diags.append(_error(epath, f"role '{end.role}' is not an identifier"))
            mult = end.multiplicity
            if mult.lower < 0:
                diags.append(
                    _error(f"{epath}.multiplicity", f"negative lower bound {mult.lower}")
                )
            if mult.upper is not None and mult.upper < 1:
                diags.append(
                    _error(f"{epath}.multiplicity", f"upper bound {mult.upper} < 1")
                )
            if mult.upper is not None and mult.lower > mult.upper:
                diags.append(
                    _error(
                        f"{epath}.multiplicity",
                        f"lower > upper ({mult.lower} > {mult.upper})",
                    )
                )
            if model.class_named(end.target.name) != end.target:
                diags.append(
                    _error(epath, f"end target '{end.target.name}' is not a model class")
                )

    # Role names must be unambiguous per navigating class.
    for cls in model.classes:
        seen_roles: set[str] = set()
        for assoc in model.associations:
            for end, opposite in ((assoc.end1, assoc.end2), (assoc.end2, assoc.end1)):
                if opposite.target.name != cls.name:
                    continue
                if end.role in seen_roles:
                    diags.append(
                        _error(
                            f"associations[{assoc.name}]",
                            f"role '{end.role}' is ambiguous when navigating "
                            f"from class '{cls.name}'",
                        )
                    )
                seen_roles.add(end.role)

    seen_constraints: set[str] = set()
    for con in model.constraints:
        path = f"constraints[{con.name}]"
        if con.name in seen_constraints:
            diags.append(_error(path, f"duplicate constraint name '{con.name}'"))
        seen_constraints.add(con.name)
        if not is_identifier(con.name):
            diags.append(
                _error(path, f"constraint name '{con.name}' is not an identifier")
            )
        if model.class_named(con.context_class.name) != con.context_class:
            diags.append(
                _error(path, f"context class '{con.context_class.name}' is not a model class")
            )
        if con.language != "OCL":
            diags.append(_error(path, f"unsupported constraint language '{con.language}'"))

    return diags


def validate_conformance(
    objects: ObjectModel, model: StructuralModel
) -> list[ModelDiagnostic]:
    """Check that an object model instantiates the structural model.

    Structural mismatches (unknown class, bad slot, bad link ends) are
    errors; multiplicity-count violations are warnings only.
    """
    diags: list[ModelDiagnostic] = []

    seen_names: set[str] = set()
    for obj in objects.objects:
        path = f"objects[{obj.name}]"
        if obj.name in seen_names:
            diags.append(_error(path, f"duplicate object name '{obj.name}'"))
        seen_names.add(obj.name)
        if not is_identifier(obj.name):
            diags.append(_error(path, f"object name '{obj.name}' is not an identifier"))

        model_cls = model.class_named(obj.classifier.name)
        if model_cls is None:
            diags.append(_error(path, f"unknown class '{obj.classifier.name}'"))
            continue
        if model_cls != obj.classifier:
            diags.append(
                _error(path, f"classifier '{obj.classifier.name}' differs from the model class")
            )
            continue

        for slot_name, literal in obj.slots.items():
            spath = f"{path}.slots[{slot_name}]"
            attr = model_cls.attribute_named(slot_name)
            if attr is None:
                diags.append(
                    _error(spath, f"class '{model_cls.name}' has no attribute '{slot_name}'")
                )
            elif literal.kind is not attr.type:
                diags.append(
                    _error(
                        spath,
                        f"slot type mismatch: attribute '{slot_name}' is "
                        f"{attr.type.value}, value is {literal.kind.value}",
                    )
                )

    for link in objects.links:
        path = f"links[{link.name}]"
        model_assoc = None
        for assoc in model.associations:
            if assoc.name == link.association.name:
                model_assoc = assoc
                break
        if model_assoc is None or model_assoc != link.association:
            diags.append(
                _error(path, f"unknown association '{link.association.name}'")
            )
            continue
        for label, end, obj in (
            ("end1", link.association.end1, link.end1_object),
            ("end2", link.association.end2, link.end2_object),
        ):
            if objects.object_named(obj.name) != obj:
                diags.append(
                    _error(f"{path}.{label}", f"object '{obj.name}' is not in the object model")
                )
            elif obj.classifier.name != end.target.name:
                diags.append(
                    _error(
                        f"{path}.{label}",
                        f"object '{obj.name}' is a {obj.classifier.name}, "
                        f"end '{end.role}' expects {end.target.name}",
                    )
                )

    if any(d.severity is Severity.ERROR for d in diags):
        return diags

    # Counts are advisory: partially populated scenarios stay loadable.
    for obj in objects.objects:
        for role, (assoc, end) in sorted(model.navigable_ends(obj.classifier).items()):
            count = len(navigate(objects, obj, role, model))
            mult = end.multiplicity
            if count < mult.lower or (mult.upper is not None and count > mult.upper):
                diags.append(
                    _warning(
                        f"objects[{obj.name}]",
                        f"{count} object(s) linked via '{role}', "
                        f"multiplicity is {mult}",
                    )
                )

    return diags


# ---------- Queries ----------

def instances_of(objects: ObjectModel, cls: ClassDef) -> list[ObjectInstance]:
    """All instances of cls, ordered by object name."""
    return [obj for obj in objects.objects if obj.classifier.name == cls.name]


def navigate(
    objects: ObjectModel,
    source: ObjectInstance,
    role_name: str,
    model: StructuralModel,
) -> list[ObjectInstance]:
    """Objects linked to source via the given role, ordered by name.

    Navigation is set-valued: an object linked twice appears once.
    Raises UnknownRoleError when no end with that role is navigable from
    source's class.
    """
    lookup = model.navigable_ends(source.classifier)
    if role_name not in lookup:
        raise UnknownRoleError(role_name, source.classifier.name)
    assoc, end = lookup[role_name]

    found: dict[str, ObjectInstance] = {}
    for link in objects.links:
        if link.association.name != assoc.name:
            continue
        if end is assoc.end1:
            near, far = link.end2_object, link.end1_object
        else:
            near, far = link.end1_object, link.end2_object
        if near.name == source.name:
            found[far.name] = far
    return [found[name] for name in sorted(found)]
