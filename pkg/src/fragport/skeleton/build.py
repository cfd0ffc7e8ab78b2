"""Skeleton model construction from a schema plus a type mapping.

Shape rules:
  - one target module per source file (snake_case of the top-level class);
  - inner classes are unfolded to top level in the same module, defined
    before their outer class, with a dot-notation alias (Outer.Inner = Inner)
    appended so call sites keep working;
  - fields become class-level annotated stubs defaulted to None, names
    mangled by access modifier (private -> __x, protected -> _x);
  - methods become typed stubs with pass bodies; interfaces and abstract
    classes subclass abc.ABC and their bodiless methods get
    @abc.abstractmethod so instantiation raises;
  - annotations that would be evaluated before their class exists
    (self-references, later-in-module classes, demoted cycle partners) are
    emitted as string literals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from fragport.errors import UnmappedType
from fragport.sourcemodel.model import Fragment, Schema
from fragport.typemap.mapping import TypeMapping
from fragport.typemap.resolve import map_type_expr


def snake_case(name: str) -> str:
    out = re.sub(r"(?<=[a-z0-9])([A-Z])", r"_\1", name)
    return out.lower()


def mangle(name: str, modifiers: list[str]) -> str:
    if "private" in modifiers:
        return f"__{name}"
    if "protected" in modifiers:
        return f"_{name}"
    return name


@dataclass
class FieldStub:
    fragment_id: str
    name: str                     # mangled
    annotation: str
    quote: bool = False

    def render(self) -> str:
        ann = f'"{self.annotation}"' if self.quote else self.annotation
        return f"{self.name}: {ann} = None"


@dataclass
class MethodStub:
    fragment_id: str
    name: str
    params: list[tuple[str, str | None]]      # (name, annotation)
    return_annotation: str | None
    is_static: bool = False
    is_abstract: bool = False
    quote_types: set[str] = field(default_factory=set)
    local_imports: list[str] = field(default_factory=list)
    callee_classes: set[str] = field(default_factory=set)   # simple names

    def signature_line(self) -> str:
        parts = [] if self.is_static else ["self"]
        for pname, ann in self.params:
            parts.append(f"{pname}: {self._fmt(ann)}" if ann else pname)
        ret = f" -> {self._fmt(self.return_annotation)}" if self.return_annotation else ""
        return f"def {self.name}({', '.join(parts)}){ret}:"

    def _fmt(self, ann: str | None) -> str:
        if ann is None:
            return "typing.Any"
        for name in self.quote_types:
            if re.search(rf"\b{re.escape(name)}\b", ann):
                return f'"{ann}"'
        return ann


@dataclass
class SkeletonClass:
    name: str
    qname: str                    # source qualified name
    module: str                   # dotted target module
    base_classes: list[str]
    field_stubs: list[FieldStub]
    method_stubs: list[MethodStub]
    is_abstract_base: bool = False
    alias_on: str | None = None   # outer class simple name for dot-notation alias


@dataclass
class TestMethodStub(MethodStub):
    pass


@dataclass
class TestModulePlan:
    module: str
    path: str
    class_name: str
    setup_stub: MethodStub | None
    stubs: list[MethodStub] = field(default_factory=list)
    field_stubs: list[FieldStub] = field(default_factory=list)
    imports: dict[str, set[str]] = field(default_factory=dict)   # module -> class names


@dataclass
class ModulePlan:
    module: str                   # dotted, e.g. minilib.core.flag
    path: str                     # repo-relative file path
    classes: list[SkeletonClass] = field(default_factory=list)
    imports: dict[str, set[str]] = field(default_factory=dict)   # module -> class names
    local_only: set[str] = field(default_factory=set)            # demoted modules
    needs_typing: bool = False
    needs_abc: bool = False


@dataclass
class SkeletonProject:
    modules: dict[str, ModulePlan] = field(default_factory=dict)
    test_modules: dict[str, TestModulePlan] = field(default_factory=dict)
    module_of_class: dict[str, str] = field(default_factory=dict)  # source qname -> module
    validation_status: dict[str, bool] = field(default_factory=dict)

    def class_named(self, qname: str) -> SkeletonClass:
        plan = self.modules[self.module_of_class[qname]]
        for cls in plan.classes:
            if cls.qname == qname:
                return cls
        raise KeyError(qname)


def _module_for(record, schema: Schema) -> str:
    """Target module of a source class (inner classes fold into the outer's)."""
    qname = record.qualified_name
    while record.enclosing_class:
        qname = record.enclosing_class
        record = schema.class_by_name(qname)
    package, _, simple = qname.rpartition(".")
    return (package + "." if package else "") + snake_case(simple)


def _map_or_collect(expr: str | None, mapping: TypeMapping, missing: list[str]) -> str | None:
    if expr is None:
        return None
    mapped = map_type_expr(expr, mapping)
    if mapped is None:
        missing.append(expr)
    return mapped


def build_skeleton(schema: Schema, mapping: TypeMapping) -> SkeletonProject:
    """Typed stub project; raises UnmappedType listing offending fragments."""
    project = SkeletonProject()
    app_classes = [c for c in schema.classes if c.origin == "app"]
    test_classes = [c for c in schema.classes if c.origin == "test"]
    class_names = {c.qualified_name for c in schema.classes}
    simple_of = {c.qualified_name: c.qualified_name.rsplit(".", 1)[-1] for c in schema.classes}
    unmapped: dict[str, list[str]] = {}

    for record in app_classes:
        module = _module_for(record, schema)
        project.module_of_class[record.qualified_name] = module
        if module not in project.modules:
            project.modules[module] = ModulePlan(
                module=module, path=module.replace(".", "/") + ".py")

    frags_by_class: dict[str, list[Fragment]] = {}
    for frag in schema.fragments:
        frags_by_class.setdefault(frag.class_qname, []).append(frag)
    for frags in frags_by_class.values():
        frags.sort(key=lambda f: f.location)

    owner_of = {f.id: f.class_qname for f in schema.fragments}

    for record in app_classes:
        qname = record.qualified_name
        module = project.module_of_class[qname]
        plan = project.modules[module]
        missing: list[str] = []

        bases: list[str] = []
        for sup in record.supertypes:
            if sup in class_names:
                bases.append(simple_of[sup])
                sup_module = project.module_of_class[sup]
                if sup_module != module:
                    plan.imports.setdefault(sup_module, set()).add(simple_of[sup])
        sup_records = [schema.class_by_name(s) for s in record.supertypes if s in class_names]
        needs_abc_base = record.kind in ("interface", "abstract") and not any(
            r.kind in ("interface", "abstract") for r in sup_records)
        if needs_abc_base:
            bases.append("abc.ABC")
            plan.needs_abc = True

        field_stubs: list[FieldStub] = []
        method_stubs: list[MethodStub] = []
        referenced: set[str] = set()
        for frag in frags_by_class.get(qname, []):
            if frag.kind == "field":
                ann = _map_or_collect(frag.return_type, mapping, missing)
                field_stubs.append(FieldStub(
                    fragment_id=frag.id,
                    name=mangle(frag.name, frag.modifiers),
                    annotation=ann or "typing.Any",
                ))
                referenced.update(_app_types_in(frag.return_type or "", schema))
            else:
                params = []
                for p_expr, p_name in zip(frag.param_types, _param_names(frag)):
                    params.append((p_name, _map_or_collect(p_expr, mapping, missing)))
                    referenced.update(_app_types_in(p_expr, schema))
                if frag.is_constructor:
                    name = "__init__"
                    ret = "None"
                else:
                    name = mangle(frag.name, frag.modifiers)
                    ret = _map_or_collect(frag.return_type or "void", mapping, missing)
                    referenced.update(_app_types_in(frag.return_type or "", schema))
                stub = MethodStub(
                    fragment_id=frag.id,
                    name=name,
                    params=params,
                    return_annotation=ret,
                    is_static=frag.is_static and not frag.is_constructor,
                    is_abstract=frag.is_abstract,
                )
                for callee in frag.callees:
                    owner = owner_of.get(callee)
                    if owner is not None and owner in project.module_of_class:
                        stub.callee_classes.add(simple_of[owner])
                method_stubs.append(stub)
                if frag.is_abstract:
                    plan.needs_abc = True
            # callee owners feed the import set
            for callee in frag.callees:
                owner = owner_of.get(callee)
                if owner is not None and owner in project.module_of_class:
                    referenced.add(owner)

        if missing:
            unmapped[qname] = sorted(set(missing))

        for ref in sorted(referenced):
            ref_module = project.module_of_class.get(ref)
            if ref_module and ref_module != module:
                plan.imports.setdefault(ref_module, set()).add(simple_of[ref])

        cls = SkeletonClass(
            name=simple_of[qname],
            qname=qname,
            module=module,
            base_classes=bases,
            field_stubs=field_stubs,
            method_stubs=method_stubs,
            is_abstract_base=record.kind in ("interface", "abstract"),
            alias_on=simple_of[record.enclosing_class] if record.enclosing_class else None,
        )
        plan.classes.append(cls)

    if unmapped:
        offenders = "; ".join(f"{k}: {', '.join(v)}" for k, v in sorted(unmapped.items()))
        raise UnmappedType(f"signature types without mapping entries: {offenders}",
                           offending=sorted(unmapped))

    for plan in project.modules.values():
        plan.classes.sort(key=lambda c: (c.alias_on is None, _class_order(schema, c.qname)))
        _quote_forward_references(plan)
        plan.needs_typing = _uses_typing(plan)

    _build_test_modules(project, schema, test_classes, frags_by_class, simple_of, mapping)
    return project


def _class_order(schema: Schema, qname: str) -> int:
    frags = [f for f in schema.fragments if f.class_qname == qname]
    return min((f.location[0] for f in frags), default=0)


def _param_names(frag: Fragment) -> list[str]:
    # parameter names are recoverable from the code header; fall back to p0..pn
    header = frag.code.split("{", 1)[0]
    match = re.search(r"\(([^)]*)\)", header)
    if match:
        names = []
        for chunk in match.group(1).split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            names.append(chunk.split()[-1])
        if len(names) == len(frag.param_types):
            return names
    return [f"p{i}" for i in range(len(frag.param_types))]


def _app_types_in(expr: str, schema: Schema) -> set[str]:
    from fragport.typemap.extract import split_type_expr

    class_names = {c.qualified_name for c in schema.classes if c.origin == "app"}
    simple_map: dict[str, str] = {}
    for qname in class_names:
        simple_map.setdefault(qname.rsplit(".", 1)[-1], qname)
    found = set()
    for name in split_type_expr(expr):
        if name in class_names:
            found.add(name)
        elif name in simple_map:
            found.add(simple_map[name])
    return found


def _quote_forward_references(plan: ModulePlan) -> None:
    """String-quote annotations referencing classes not yet defined at class-body
    execution time: the class itself and any class defined later in the module."""
    defined: list[str] = [c.name for c in plan.classes]
    for i, cls in enumerate(plan.classes):
        not_yet = set(defined[i:])          # itself and everything after
        for fstub in cls.field_stubs:
            if any(re.search(rf"\b{re.escape(n)}\b", fstub.annotation) for n in not_yet):
                fstub.quote = True
        for mstub in cls.method_stubs:
            mstub.quote_types |= not_yet & _annotation_names(mstub)


def _annotation_names(stub: MethodStub) -> set[str]:
    names = set()
    for _, ann in stub.params:
        if ann:
            names.update(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", ann))
    if stub.return_annotation:
        names.update(re.findall(r"[A-Za-z_][A-Za-z0-9_]*", stub.return_annotation))
    return names


def _uses_typing(plan: ModulePlan) -> bool:
    for cls in plan.classes:
        for fstub in cls.field_stubs:
            if "typing." in fstub.annotation:
                return True
        for mstub in cls.method_stubs:
            for _, ann in mstub.params:
                if ann and "typing." in ann:
                    return True
            if mstub.return_annotation and "typing." in mstub.return_annotation:
                return True
    return False


def _build_test_modules(project: SkeletonProject, schema: Schema, test_classes,
                        frags_by_class, simple_of, mapping: TypeMapping) -> None:
    from fragport.decompose.testchain import TestFragmentChain

    chains = [TestFragmentChain.from_dict(d) for d in schema.test_chains]
    chains_by_class: dict[str, list[TestFragmentChain]] = {}
    for chain in chains:
        chains_by_class.setdefault(chain.class_qname, []).append(chain)
    owner_of = {f.id: f.class_qname for f in schema.fragments}

    for record in test_classes:
        qname = record.qualified_name
        package, _, simple = qname.rpartition(".")
        module = (package + "." if package else "") + "test_" + snake_case(simple)
        path = "tests/" + module.replace(".", "/") + ".py"
        setup_stub = None
        stubs: list[MethodStub] = []
        field_stubs: list[FieldStub] = []
        imports: dict[str, set[str]] = {}

        def import_owner(fragment_id: str) -> None:
            owner = owner_of.get(fragment_id)
            if owner is None:
                return
            owner_module = project.module_of_class.get(owner)
            if owner_module is not None:
                imports.setdefault(owner_module, set()).add(simple_of[owner])

        def import_types_of(expr: str) -> None:
            for ref in _app_types_in(expr, schema):
                ref_module = project.module_of_class.get(ref)
                if ref_module is not None:
                    imports.setdefault(ref_module, set()).add(simple_of[ref])

        for frag in frags_by_class.get(qname, []):
            if frag.kind == "field":
                ann = map_type_expr(frag.return_type or "", mapping) or "typing.Any"
                field_stubs.append(FieldStub(
                    fragment_id=frag.id,
                    name=mangle(frag.name, frag.modifiers),
                    annotation=ann,
                ))
                import_types_of(frag.return_type or "")
                continue
            if frag.kind != "test_method":
                continue
            for callee in frag.callees:
                import_owner(callee)
            if "Before" in frag.annotations or "BeforeEach" in frag.annotations:
                setup_stub = MethodStub(fragment_id=frag.id, name="setUp",
                                        params=[], return_annotation="None")
                continue
            if "Test" in frag.annotations:
                continue  # chain slices stand in for the unit test itself
            stubs.append(MethodStub(fragment_id=frag.id, name=frag.name,
                                    params=[(n, None) for n in _param_names(frag)],
                                    return_annotation="None"))
        for chain in sorted(chains_by_class.get(qname, []), key=lambda c: c.method_name):
            for cf in chain.fragments:
                stubs.append(MethodStub(
                    fragment_id=chain.fragment_id(cf.index),
                    name=f"test_{chain.method_name}_{cf.index}",
                    params=[], return_annotation="None"))
                for fid in cf.exercised_direct:
                    import_owner(fid)
        project.test_modules[module] = TestModulePlan(
            module=module, path=path, class_name=simple,
            setup_stub=setup_stub, stubs=stubs, field_stubs=field_stubs,
            imports=imports)
