"""Tree-walking interpreter for the supported Java subset.

Scope notes:
  - arithmetic follows Java semantics where they differ from Python
    (int division truncates toward zero, % takes the dividend's sign);
  - `char` values are wrapped in JChar so overload dispatch can tell them
    apart from String;
  - a small builtin library covers String, StringBuilder, ArrayList, Math,
    Integer, the java.lang exception hierarchy and the JUnit assert shim;
  - every user method/constructor invocation is counted for coverage, and a
    per-method bridge hook lets a harness substitute a foreign implementation
    (used for in-isolation validation).
"""

from __future__ import annotations

from dataclasses import dataclass

from fragport.javamini import ast as J

MAX_CALL_DEPTH = 400


class JmError(Exception):
    """Wraps a thrown source-language exception object."""

    def __init__(self, value: "JmObject", trace: list[str]):
        super().__init__(value.describe())
        self.value = value
        self.trace = trace

    def is_assertion(self) -> bool:
        return self.value.cls.is_subtype_of("java.lang.AssertionError")


class ReturnSignal(Exception):
    def __init__(self, value):
        self.value = value


class BreakSignal(Exception):
    pass


class ContinueSignal(Exception):
    pass


@dataclass(frozen=True)
class JChar:
    ch: str

    def __str__(self) -> str:
        return self.ch


class ClassInfo:
    def __init__(self, qname: str, decl: J.ClassDecl | None, superclass: "ClassInfo | None",
                 interfaces: list["ClassInfo"], unit: J.CompilationUnit | None):
        self.qname = qname
        self.simple_name = qname.rsplit(".", 1)[-1]
        self.decl = decl
        self.superclass = superclass
        self.interfaces = interfaces
        self.unit = unit
        self.static_values: dict[str, object] = {}
        self.statics_ready = False

    @property
    def is_abstract(self) -> bool:
        return self.decl is not None and self.decl.is_abstract

    def methods_named(self, name: str) -> list[J.MethodDecl]:
        found: list[J.MethodDecl] = []
        cls: ClassInfo | None = self
        seen_sigs: set[str] = set()
        while cls is not None:
            if cls.decl is not None:
                for m in cls.decl.methods:
                    if m.name == name and not m.is_constructor and m.signature() not in seen_sigs:
                        found.append(m)
                        seen_sigs.add(m.signature())
            cls = cls.superclass
        return found

    def constructors(self) -> list[J.MethodDecl]:
        if self.decl is None:
            return []
        return [m for m in self.decl.methods if m.is_constructor]

    def all_supertypes(self) -> list["ClassInfo"]:
        out: list[ClassInfo] = []
        stack: list[ClassInfo] = [self]
        while stack:
            cls = stack.pop()
            if cls in out:
                continue
            out.append(cls)
            if cls.superclass:
                stack.append(cls.superclass)
            stack.extend(cls.interfaces)
        return out

    def is_subtype_of(self, qname: str) -> bool:
        return any(c.qname == qname or c.simple_name == qname for c in self.all_supertypes())


class JmObject:
    def __init__(self, cls: ClassInfo):
        self.cls = cls
        self.fields: dict[str, object] = {}

    def describe(self) -> str:
        msg = self.fields.get("__message__")
        if msg is not None:
            return f"{self.cls.simple_name}: {msg}"
        return self.cls.simple_name


class JList:
    def __init__(self):
        self.items: list[object] = []


class JStringBuilder:
    def __init__(self, initial: str = ""):
        self.parts: list[str] = [initial] if initial else []


BUILTIN_EXCEPTIONS = {
    "java.lang.Throwable": None,
    "java.lang.Exception": "java.lang.Throwable",
    "java.lang.RuntimeException": "java.lang.Exception",
    "java.lang.IllegalArgumentException": "java.lang.RuntimeException",
    "java.lang.IllegalStateException": "java.lang.RuntimeException",
    "java.lang.NullPointerException": "java.lang.RuntimeException",
    "java.lang.ArithmeticException": "java.lang.RuntimeException",
    "java.lang.IndexOutOfBoundsException": "java.lang.RuntimeException",
    "java.lang.UnsupportedOperationException": "java.lang.RuntimeException",
    "java.lang.AssertionError": "java.lang.Throwable",
}


def method_key(class_qname: str, decl: J.MethodDecl) -> str:
    return f"{class_qname}#{decl.signature()}"


def field_key(class_qname: str, name: str) -> str:
    return f"{class_qname}#{name}"


@dataclass
class BridgeHook:
    """Replaces one method's body with a foreign callable.

    `invoke(receiver, args)` gets interpreter-level values and must return an
    interpreter-level value (or raise JmError).
    """
    target_key: str
    invoke: object


class Interpreter:
    def __init__(self, units: list[J.CompilationUnit]):
        self.classes: dict[str, ClassInfo] = {}
        self.simple_index: dict[str, list[str]] = {}
        self.coverage: dict[str, int] = {}
        self.current_test_hits: set[str] | None = None
        self.call_stack: list[str] = []
        self.bridge: BridgeHook | None = None
        self._register_builtin_exceptions()
        self._load_units(units)

    # -- class registry -----------------------------------------------------

    def _register_builtin_exceptions(self) -> None:
        for qname, sup in BUILTIN_EXCEPTIONS.items():
            parent = self.classes.get(sup) if sup else None
            info = ClassInfo(qname, None, parent, [], None)
            self.classes[qname] = info
            self.simple_index.setdefault(info.simple_name, []).append(qname)
        root = ClassInfo("java.lang.Object", None, None, [], None)
        self.classes["java.lang.Object"] = root
        self.simple_index.setdefault("Object", []).append("java.lang.Object")

    def _load_units(self, units: list[J.CompilationUnit]) -> None:
        pending: list[tuple[str, J.ClassDecl, J.CompilationUnit]] = []

        def collect(decl: J.ClassDecl, prefix: str, unit: J.CompilationUnit) -> None:
            qname = f"{prefix}.{decl.name}" if prefix else decl.name
            pending.append((qname, decl, unit))
            for inner in decl.inner_classes:
                collect(inner, qname, unit)

        for unit in units:
            for decl in unit.classes:
                collect(decl, unit.package or "", unit)

        for qname, decl, unit in pending:
            info = ClassInfo(qname, decl, None, [], unit)
            self.classes[qname] = info
            self.simple_index.setdefault(decl.name, []).append(qname)

        for qname, decl, unit in pending:
            info = self.classes[qname]
            if decl.extends:
                info.superclass = self.resolve_class(decl.extends, unit)
            else:
                info.superclass = self.classes["java.lang.Object"]
            info.interfaces = [self.resolve_class(i, unit) for i in decl.implements]

    def resolve_class(self, name: str, unit: J.CompilationUnit | None) -> ClassInfo:
        if name in self.classes:
            return self.classes[name]
        if unit is not None:
            if unit.package:
                qualified = f"{unit.package}.{name}"
                if qualified in self.classes:
                    return self.classes[qualified]
            for imp in unit.imports:
                imp = imp.removeprefix("static ").strip()
                if imp.endswith("." + name) and imp in self.classes:
                    return self.classes[imp]
        candidates = self.simple_index.get(name.rsplit(".", 1)[-1], [])
        if name in candidates:
            return self.classes[name]
        if len(candidates) == 1:
            return self.classes[candidates[0]]
        for builtin in ("java.lang." + name,):
            if builtin in self.classes:
                return self.classes[builtin]
        # dotted reference to an inner class, e.g. Formatter.Buffer
        if "." in name:
            outer, _, inner = name.rpartition(".")
            outer_info = self.resolve_class(outer, unit)
            qualified = f"{outer_info.qname}.{inner}"
            if qualified in self.classes:
                return self.classes[qualified]
        raise self.runtime_error("NullPointerException", f"unknown class {name}")

    def try_resolve_class(self, name: str, unit: J.CompilationUnit | None) -> ClassInfo | None:
        try:
            return self.resolve_class(name, unit)
        except JmError:
            return None

    # -- statics -------------------------------------------------------------

    def ensure_statics(self, cls: ClassInfo) -> None:
        if cls.statics_ready or cls.decl is None:
            return
        cls.statics_ready = True
        for f in cls.decl.fields:
            if "static" in f.modifiers:
                value = self.eval_expr(f.init, Env(self, None, cls, {})) if f.init is not None \
                    else default_value(f.type)
                cls.static_values[f.name] = value
                self.count_hit(field_key(cls.qname, f.name))

    # -- coverage / bridge ----------------------------------------------------

    def count_hit(self, key: str) -> None:
        self.coverage[key] = self.coverage.get(key, 0) + 1
        if self.current_test_hits is not None:
            self.current_test_hits.add(key)

    # -- object lifecycle -----------------------------------------------------

    def instantiate(self, cls: ClassInfo, args: list[object]) -> JmObject:
        if cls.is_abstract:
            raise self.runtime_error("IllegalStateException",
                                     f"cannot instantiate abstract type {cls.simple_name}")
        self.ensure_statics(cls)
        obj = JmObject(cls)
        self._init_fields(obj, cls)
        ctor = self._pick_constructor(cls, args)
        if ctor is not None:
            self.invoke(cls, ctor, obj, args)
        elif args:
            raise self.runtime_error("IllegalArgumentException",
                                     f"no constructor of {cls.simple_name} takes {len(args)} arguments")
        return obj

    def _init_fields(self, obj: JmObject, cls: ClassInfo) -> None:
        chain: list[ClassInfo] = []
        cur: ClassInfo | None = cls
        while cur is not None:
            chain.append(cur)
            cur = cur.superclass
        for c in reversed(chain):
            if c.decl is None:
                continue
            self.ensure_statics(c)
            for f in c.decl.fields:
                if "static" in f.modifiers:
                    continue
                env = Env(self, obj, c, {})
                obj.fields[f.name] = self.eval_expr(f.init, env) if f.init is not None else default_value(f.type)
                self.count_hit(field_key(c.qname, f.name))

    def _pick_constructor(self, cls: ClassInfo, args: list[object]) -> J.MethodDecl | None:
        ctors = cls.constructors()
        if not ctors:
            return None
        return self.pick_overload(ctors, args, f"constructor of {cls.simple_name}")

    # -- dispatch -------------------------------------------------------------

    def pick_overload(self, candidates: list[J.MethodDecl], args: list[object], what: str) -> J.MethodDecl:
        by_arity = [m for m in candidates if len(m.params) == len(args)]
        if not by_arity:
            raise self.runtime_error("IllegalArgumentException",
                                     f"no overload of {what} takes {len(args)} arguments")
        if len(by_arity) == 1:
            return by_arity[0]
        scored: list[tuple[int, J.MethodDecl]] = []
        for m in by_arity:
            score = 0
            ok = True
            for p, a in zip(m.params, args):
                s = self._match_score(p.type, a)
                if s < 0:
                    ok = False
                    break
                score += s
            if ok:
                scored.append((score, m))
        if not scored:
            raise self.runtime_error("IllegalArgumentException", f"no applicable overload of {what}")
        scored.sort(key=lambda pair: -pair[0])
        if len(scored) > 1 and scored[0][0] == scored[1][0]:
            raise self.runtime_error("IllegalStateException", f"ambiguous overload of {what}")
        return scored[0][1]

    def _match_score(self, type_ref: J.TypeRef, value: object) -> int:
        name = type_ref.name
        if value is None:
            return 1 if name not in ("int", "double", "boolean", "char") else -1
        if name == "int":
            return 2 if isinstance(value, int) and not isinstance(value, bool) else -1
        if name == "double":
            if isinstance(value, float):
                return 2
            return 1 if isinstance(value, int) and not isinstance(value, bool) else -1
        if name == "boolean":
            return 2 if isinstance(value, bool) else -1
        if name == "char":
            return 2 if isinstance(value, JChar) else -1
        if name == "String":
            return 2 if isinstance(value, str) else -1
        if name == "Object":
            return 1
        if isinstance(value, JmObject):
            return 2 if value.cls.is_subtype_of(name) else -1
        if isinstance(value, JList) and name in ("ArrayList", "List"):
            return 2
        if isinstance(value, JStringBuilder) and name == "StringBuilder":
            return 2
        return -1

    def invoke(self, owner: ClassInfo, decl: J.MethodDecl, receiver: JmObject | None,
               args: list[object]) -> object:
        key = method_key(owner.qname, decl)
        self.count_hit(key)
        if len(self.call_stack) >= MAX_CALL_DEPTH:
            raise self.runtime_error("IllegalStateException", "call depth exceeded")
        self.call_stack.append(key)
        try:
            if self.bridge is not None and self.bridge.target_key == key:
                return self.bridge.invoke(receiver, args)
            if decl.body is None:
                raise self.runtime_error("UnsupportedOperationException", f"abstract method {key}")
            env = Env(self, receiver, owner, {p.name: a for p, a in zip(decl.params, args)})
            try:
                if decl.is_constructor:
                    self._run_constructor(owner, decl, receiver, env)
                else:
                    self.exec_block(decl.body, env)
            except ReturnSignal as ret:
                return ret.value
            return None
        finally:
            self.call_stack.pop()

    def _run_constructor(self, owner: ClassInfo, decl: J.MethodDecl, receiver: JmObject, env: "Env") -> None:
        statements = decl.body.statements
        start = 0
        if statements and isinstance(statements[0], J.ExprStmt):
            head = statements[0].expr
            if isinstance(head, J.ThisCall):
                args = [self.eval_expr(a, env) for a in head.args]
                delegate = self._pick_constructor(owner, args)
                if delegate is None or delegate is decl:
                    raise self.runtime_error("IllegalStateException", "bad constructor delegation")
                self.invoke(owner, delegate, receiver, args)
                start = 1
            elif isinstance(head, J.SuperCall):
                args = [self.eval_expr(a, env) for a in head.args]
                sup = owner.superclass
                if sup is not None and sup.decl is not None:
                    ctor = self._pick_constructor(sup, args)
                    if ctor is not None:
                        self.invoke(sup, ctor, receiver, args)
                elif sup is not None and sup.qname in BUILTIN_EXCEPTIONS and args:
                    receiver.fields["__message__"] = to_jstring(args[0])
                start = 1
            else:
                self._implicit_super(owner, receiver)
        else:
            self._implicit_super(owner, receiver)
        for stmt in statements[start:]:
            self.exec_stmt(stmt, env)

    def _implicit_super(self, owner: ClassInfo, receiver: JmObject) -> None:
        sup = owner.superclass
        if sup is not None and sup.decl is not None:
            ctor = self._pick_constructor(sup, [])
            if ctor is not None:
                self.invoke(sup, ctor, receiver, [])

    def invoke_method_by_name(self, receiver: JmObject, name: str, args: list[object]) -> object:
        candidates = receiver.cls.methods_named(name)
        if not candidates:
            return self._builtin_object_method(receiver, name, args)
        decl = self.pick_overload(candidates, args, f"{receiver.cls.simple_name}.{name}")
        owner = self._declaring_class(receiver.cls, decl)
        return self.invoke(owner, decl, receiver, args)

    def _declaring_class(self, cls: ClassInfo, decl: J.MethodDecl) -> ClassInfo:
        cur: ClassInfo | None = cls
        while cur is not None:
            if cur.decl is not None and decl in cur.decl.methods:
                return cur
            cur = cur.superclass
        return cls

    def _builtin_object_method(self, receiver: JmObject, name: str, args: list[object]) -> object:
        if name == "getMessage" and not args:
            return receiver.fields.get("__message__")
        if name == "toString" and not args:
            return receiver.describe()
        if name == "equals" and len(args) == 1:
            return receiver is args[0]
        raise self.runtime_error("NullPointerException",
                                 f"no method {name} on {receiver.cls.simple_name}")

    # -- errors ----------------------------------------------------------------

    def runtime_error(self, simple_name: str, message: str) -> JmError:
        cls = self.classes[f"java.lang.{simple_name}"]
        obj = JmObject(cls)
        obj.fields["__message__"] = message
        return JmError(obj, list(self.call_stack))

    def assertion_error(self, message: str) -> JmError:
        cls = self.classes["java.lang.AssertionError"]
        obj = JmObject(cls)
        obj.fields["__message__"] = message
        return JmError(obj, list(self.call_stack))

    # -- statements --------------------------------------------------------------

    def exec_block(self, block: J.Block, env: "Env") -> None:
        scope = env.child()
        for stmt in block.statements:
            self.exec_stmt(stmt, scope)

    def exec_stmt(self, stmt: J.Stmt, env: "Env") -> None:
        if isinstance(stmt, J.Block):
            self.exec_block(stmt, env)
        elif isinstance(stmt, J.LocalVar):
            value = self.eval_expr(stmt.init, env) if stmt.init is not None else default_value(stmt.type)
            env.declare(stmt.name, value)
        elif isinstance(stmt, J.ExprStmt):
            self.eval_expr(stmt.expr, env)
        elif isinstance(stmt, J.If):
            if truthy(self.eval_expr(stmt.cond, env)):
                self.exec_stmt(stmt.then, env)
            elif stmt.other is not None:
                self.exec_stmt(stmt.other, env)
        elif isinstance(stmt, J.While):
            while truthy(self.eval_expr(stmt.cond, env)):
                try:
                    self.exec_stmt(stmt.body, env)
                except BreakSignal:
                    break
                except ContinueSignal:
                    continue
        elif isinstance(stmt, J.For):
            scope = env.child()
            if stmt.init is not None:
                self.exec_stmt(stmt.init, scope)
            while stmt.cond is None or truthy(self.eval_expr(stmt.cond, scope)):
                try:
                    self.exec_stmt(stmt.body, scope)
                except BreakSignal:
                    break
                except ContinueSignal:
                    pass
                if stmt.update is not None:
                    self.eval_expr(stmt.update, scope)
        elif isinstance(stmt, J.Return):
            raise ReturnSignal(self.eval_expr(stmt.value, env) if stmt.value is not None else None)
        elif isinstance(stmt, J.Throw):
            value = self.eval_expr(stmt.value, env)
            if not isinstance(value, JmObject):
                raise self.runtime_error("IllegalStateException", "throw of non-exception value")
            raise JmError(value, list(self.call_stack))
        elif isinstance(stmt, J.Try):
            try:
                self.exec_block(stmt.body, env)
            except JmError as err:
                for catch in stmt.catches:
                    cls = self.resolve_class(catch.type.name, env.owner.unit)
                    if err.value.cls.is_subtype_of(cls.qname):
                        scope = env.child()
                        scope.declare(catch.name, err.value)
                        self.exec_block(catch.body, scope)
                        return
                raise
        elif isinstance(stmt, J.Break):
            raise BreakSignal()
        elif isinstance(stmt, J.Continue):
            raise ContinueSignal()
        else:
            raise AssertionError(f"unhandled statement {type(stmt).__name__}")

    # -- expressions ----------------------------------------------------------------

    def eval_expr(self, expr: J.Expr, env: "Env") -> object:
        if isinstance(expr, J.Literal):
            if expr.kind == "char":
                return JChar(str(expr.value))
            return expr.value
        if isinstance(expr, J.Name):
            return env.lookup(expr.ident)
        if isinstance(expr, J.This):
            if env.receiver is None:
                raise self.runtime_error("IllegalStateException", "this in static context")
            return env.receiver
        if isinstance(expr, J.FieldAccess):
            return self._eval_field_access(expr, env)
        if isinstance(expr, J.Call):
            return self._eval_call(expr, env)
        if isinstance(expr, J.New):
            base_name = expr.type.name.rsplit(".", 1)[-1]
            if base_name == "ArrayList":
                return JList()
            if base_name == "StringBuilder":
                args = [self.eval_expr(a, env) for a in expr.args]
                return JStringBuilder(args[0] if args else "")
            cls = self.resolve_class(expr.type.name, env.owner.unit)
            if cls.qname in BUILTIN_EXCEPTIONS:
                obj = JmObject(cls)
                args = [self.eval_expr(a, env) for a in expr.args]
                if args:
                    obj.fields["__message__"] = to_jstring(args[0])
                return obj
            return self.instantiate(cls, [self.eval_expr(a, env) for a in expr.args])
        if isinstance(expr, J.Unary):
            value = self.eval_expr(expr.operand, env)
            if expr.op == "!":
                return not truthy(value)
            if expr.op == "-":
                return -value
            raise AssertionError(expr.op)
        if isinstance(expr, J.Binary):
            return self._eval_binary(expr, env)
        if isinstance(expr, J.Assign):
            return self._eval_assign(expr, env)
        if isinstance(expr, J.Ternary):
            return self.eval_expr(expr.then if truthy(self.eval_expr(expr.cond, env)) else expr.other, env)
        if isinstance(expr, J.IncDec):
            current = self.eval_expr(expr.target, env)
            updated = current + 1 if expr.op == "++" else current - 1
            self._store(expr.target, updated, env)
            return current
        if isinstance(expr, J.InstanceOf):
            value = self.eval_expr(expr.operand, env)
            if isinstance(value, JmObject):
                cls = self.resolve_class(expr.type.name, env.owner.unit)
                return value.cls.is_subtype_of(cls.qname)
            if isinstance(value, str):
                return expr.type.name == "String"
            return False
        if isinstance(expr, J.Cast):
            value = self.eval_expr(expr.operand, env)
            if expr.type.name == "int" and isinstance(value, float):
                return int(value)
            if expr.type.name == "double" and isinstance(value, int):
                return float(value)
            return value
        if isinstance(expr, (J.ThisCall, J.SuperCall)):
            raise self.runtime_error("IllegalStateException", "constructor delegation outside constructor head")
        raise AssertionError(f"unhandled expression {type(expr).__name__}")

    def _eval_field_access(self, expr: J.FieldAccess, env: "Env") -> object:
        # Class.staticField?
        if isinstance(expr.target, J.Name) and not env.has_binding(expr.target.ident):
            cls = self.try_resolve_class(expr.target.ident, env.owner.unit)
            if cls is not None:
                self.ensure_statics(cls)
                if expr.name in cls.static_values:
                    return cls.static_values[expr.name]
                raise self.runtime_error("NullPointerException",
                                         f"no static field {expr.name} on {cls.simple_name}")
        target = self.eval_expr(expr.target, env)
        if target is None:
            raise self.runtime_error("NullPointerException", f"field access .{expr.name} on null")
        if isinstance(target, JmObject):
            if expr.name in target.fields:
                return target.fields[expr.name]
            self.ensure_statics(target.cls)
            for sup in target.cls.all_supertypes():
                if expr.name in sup.static_values:
                    return sup.static_values[expr.name]
            raise self.runtime_error("NullPointerException",
                                     f"no field {expr.name} on {target.cls.simple_name}")
        raise self.runtime_error("NullPointerException", f"field access on non-object value")

    def _eval_call(self, expr: J.Call, env: "Env") -> object:
        args = [self.eval_expr(a, env) for a in expr.args]
        if expr.target is None:
            # JUnit shim via static import
            if self._has_static_import(env.owner.unit, "org.junit.Assert") and expr.name in ASSERT_FUNCTIONS:
                return ASSERT_FUNCTIONS[expr.name](self, args)
            # virtual dispatch on the receiver's runtime class when present
            lookup_cls = env.receiver.cls if env.receiver is not None else env.owner
            candidates = lookup_cls.methods_named(expr.name) or env.owner.methods_named(expr.name)
            if candidates:
                decl = self.pick_overload(candidates, args, f"{lookup_cls.simple_name}.{expr.name}")
                owner = self._declaring_class(lookup_cls, decl)
                receiver = env.receiver if not decl.is_static else None
                return self.invoke(owner, decl, receiver, args)
            raise self.runtime_error("NullPointerException", f"unknown function {expr.name}")
        # qualified call: ClassName.static(...) or value.method(...)
        if isinstance(expr.target, J.Name) and not env.has_binding(expr.target.ident):
            builtin = self._builtin_static_call(expr.target.ident, expr.name, args)
            if builtin is not NOT_HANDLED:
                return builtin
            cls = self.try_resolve_class(expr.target.ident, env.owner.unit)
            if cls is not None:
                candidates = [m for m in cls.methods_named(expr.name)]
                statics = [m for m in candidates if m.is_static]
                if statics:
                    decl = self.pick_overload(statics, args, f"{cls.simple_name}.{expr.name}")
                    self.ensure_statics(cls)
                    return self.invoke(self._declaring_class(cls, decl), decl, None, args)
                raise self.runtime_error("NullPointerException",
                                         f"no static method {expr.name} on {cls.simple_name}")
        if isinstance(expr.target, J.FieldAccess) and isinstance(expr.target.target, J.Name) \
                and not env.has_binding(expr.target.target.ident):
            # Outer.Inner.static(...) pattern
            cls = self.try_resolve_class(f"{expr.target.target.ident}.{expr.target.name}", env.owner.unit)
            if cls is not None:
                statics = [m for m in cls.methods_named(expr.name) if m.is_static]
                if statics:
                    decl = self.pick_overload(statics, args, f"{cls.simple_name}.{expr.name}")
                    self.ensure_statics(cls)
                    return self.invoke(self._declaring_class(cls, decl), decl, None, args)
        target = self.eval_expr(expr.target, env)
        return self.call_on_value(target, expr.name, args)

    def call_on_value(self, target: object, name: str, args: list[object]) -> object:
        if target is None:
            raise self.runtime_error("NullPointerException", f"call .{name}() on null")
        if isinstance(target, str):
            return self._string_method(target, name, args)
        if isinstance(target, JStringBuilder):
            return self._stringbuilder_method(target, name, args)
        if isinstance(target, JList):
            return self._list_method(target, name, args)
        if isinstance(target, JmObject):
            return self.invoke_method_by_name(target, name, args)
        raise self.runtime_error("NullPointerException", f"call .{name}() on unsupported value")

    def _has_static_import(self, unit: J.CompilationUnit | None, prefix: str) -> bool:
        if unit is None:
            return False
        return any(imp.startswith("static ") and imp.removeprefix("static ").startswith(prefix)
                   for imp in unit.imports)

    def _builtin_static_call(self, class_name: str, method: str, args: list[object]) -> object:
        if class_name == "Math":
            if method == "max":
                return max(args)
            if method == "min":
                return min(args)
            if method == "abs":
                return abs(args[0])
            raise self.runtime_error("UnsupportedOperationException", f"Math.{method}")
        if class_name == "Integer":
            if method == "parseInt":
                try:
                    return int(args[0])
                except (TypeError, ValueError):
                    raise self.runtime_error("IllegalArgumentException", f"bad int literal {args[0]!r}")
            if method == "toString":
                return to_jstring(args[0])
        if class_name == "String" and method == "valueOf":
            return to_jstring(args[0])
        return NOT_HANDLED

    def _string_method(self, target: str, name: str, args: list[object]) -> object:
        if name == "length":
            return len(target)
        if name == "charAt":
            idx = args[0]
            if not 0 <= idx < len(target):
                raise self.runtime_error("IndexOutOfBoundsException", f"index {idx} length {len(target)}")
            return JChar(target[idx])
        if name == "substring":
            if len(args) == 1:
                return target[args[0]:]
            return target[args[0]:args[1]]
        if name == "indexOf":
            return target.find(to_plain_str(args[0]))
        if name == "contains":
            return to_plain_str(args[0]) in target
        if name == "equals":
            return isinstance(args[0], str) and target == args[0]
        if name == "equalsIgnoreCase":
            return isinstance(args[0], str) and target.lower() == args[0].lower()
        if name == "isEmpty":
            return len(target) == 0
        if name == "startsWith":
            return target.startswith(args[0])
        if name == "endsWith":
            return target.endswith(args[0])
        if name == "toUpperCase":
            return target.upper()
        if name == "toLowerCase":
            return target.lower()
        if name == "trim":
            return target.strip()
        if name == "replace":
            return target.replace(to_plain_str(args[0]), to_plain_str(args[1]))
        if name == "concat":
            return target + args[0]
        if name == "compareTo":
            other = args[0]
            return (target > other) - (target < other)
        if name == "toString":
            return target
        if name == "hashCode":
            return sum(ord(c) for c in target)
        raise self.runtime_error("UnsupportedOperationException", f"String.{name}")

    def _stringbuilder_method(self, target: JStringBuilder, name: str, args: list[object]) -> object:
        if name == "append":
            target.parts.append(to_jstring(args[0]))
            return target
        if name == "toString":
            return "".join(target.parts)
        if name == "length":
            return sum(len(p) for p in target.parts)
        raise self.runtime_error("UnsupportedOperationException", f"StringBuilder.{name}")

    def _list_method(self, target: JList, name: str, args: list[object]) -> object:
        if name == "add":
            target.items.append(args[0])
            return True
        if name == "get":
            idx = args[0]
            if not 0 <= idx < len(target.items):
                raise self.runtime_error("IndexOutOfBoundsException", f"index {idx} size {len(target.items)}")
            return target.items[idx]
        if name == "set":
            target.items[args[0]] = args[1]
            return args[1]
        if name == "size":
            return len(target.items)
        if name == "isEmpty":
            return len(target.items) == 0
        if name == "contains":
            return any(jm_equals(item, args[0]) for item in target.items)
        if name == "remove":
            idx = args[0]
            return target.items.pop(idx)
        raise self.runtime_error("UnsupportedOperationException", f"ArrayList.{name}")

    def _eval_binary(self, expr: J.Binary, env: "Env") -> object:
        op = expr.op
        if op == "&&":
            return truthy(self.eval_expr(expr.left, env)) and truthy(self.eval_expr(expr.right, env))
        if op == "||":
            return truthy(self.eval_expr(expr.left, env)) or truthy(self.eval_expr(expr.right, env))
        left = self.eval_expr(expr.left, env)
        right = self.eval_expr(expr.right, env)
        if op == "+" and (isinstance(left, JChar) or isinstance(right, JChar)) \
                and not (isinstance(left, str) or isinstance(right, str)):
            if isinstance(left, JChar) and isinstance(right, JChar):
                return ord(left.ch) + ord(right.ch)
            char, num = (left, right) if isinstance(left, JChar) else (right, left)
            return ord(char.ch) + num
        if op in ("+", "-", "*", "/", "%"):
            return self._arith(op, left, right)
        if op in ("<", "<=", ">", ">="):
            lval = ord(left.ch) if isinstance(left, JChar) else left
            rval = ord(right.ch) if isinstance(right, JChar) else right
            return {"<": lval < rval, "<=": lval <= rval, ">": lval > rval, ">=": lval >= rval}[op]
        if op in ("==", "!="):
            eq = jm_equals(left, right, identity_for_objects=True)
            return eq if op == "==" else not eq
        raise AssertionError(op)

    def _eval_assign(self, expr: J.Assign, env: "Env") -> object:
        if expr.op == "=":
            value = self.eval_expr(expr.value, env)
        else:
            current = self.eval_expr(expr.target, env)
            operand = self.eval_expr(expr.value, env)
            value = self._arith(expr.op[0], current, operand)
        self._store(expr.target, value, env)
        return value

    def _arith(self, op: str, left: object, right: object) -> object:
        if op == "+":
            if isinstance(left, str) or isinstance(right, str):
                return to_jstring(left) + to_jstring(right)
            return left + right
        if op == "-":
            return left - right
        if op == "*":
            return left * right
        if op == "/":
            if isinstance(left, int) and isinstance(right, int) \
                    and not isinstance(left, bool) and not isinstance(right, bool):
                if right == 0:
                    raise self.runtime_error("ArithmeticException", "/ by zero")
                q = abs(left) // abs(right)
                return q if (left >= 0) == (right >= 0) else -q
            return left / right
        if op == "%":
            if right == 0:
                raise self.runtime_error("ArithmeticException", "% by zero")
            q = abs(left) // abs(right)
            q = q if (left >= 0) == (right >= 0) else -q
            return left - right * q
        raise AssertionError(op)

    def _store(self, target: J.Expr, value: object, env: "Env") -> None:
        if isinstance(target, J.Name):
            if env.has_binding(target.ident):
                env.rebind(target.ident, value)
                return
            # unqualified field write
            if env.receiver is not None and target.ident in env.receiver.fields:
                env.receiver.fields[target.ident] = value
                return
            self.ensure_statics(env.owner)
            for sup in env.owner.all_supertypes():
                if target.ident in sup.static_values:
                    sup.static_values[target.ident] = value
                    return
            env.declare(target.ident, value)
            return
        if isinstance(target, J.FieldAccess):
            if isinstance(target.target, J.Name) and not env.has_binding(target.target.ident):
                cls = self.try_resolve_class(target.target.ident, env.owner.unit)
                if cls is not None:
                    self.ensure_statics(cls)
                    cls.static_values[target.name] = value
                    return
            obj = self.eval_expr(target.target, env)
            if isinstance(obj, JmObject):
                obj.fields[target.name] = value
                return
            raise self.runtime_error("NullPointerException", "field store on non-object")
        raise self.runtime_error("IllegalStateException", "unsupported assignment target")


NOT_HANDLED = object()


class Env:
    def __init__(self, interp: Interpreter, receiver: JmObject | None, owner: ClassInfo,
                 bindings: dict[str, object], parent: "Env | None" = None):
        self.interp = interp
        self.receiver = receiver
        self.owner = owner
        self.bindings = bindings
        self.parent = parent

    def child(self) -> "Env":
        return Env(self.interp, self.receiver, self.owner, {}, self)

    def has_binding(self, name: str) -> bool:
        env: Env | None = self
        while env is not None:
            if name in env.bindings:
                return True
            env = env.parent
        return False

    def declare(self, name: str, value: object) -> None:
        self.bindings[name] = value

    def rebind(self, name: str, value: object) -> None:
        env: Env | None = self
        while env is not None:
            if name in env.bindings:
                env.bindings[name] = value
                return
            env = env.parent
        raise KeyError(name)

    def lookup(self, name: str) -> object:
        env: Env | None = self
        while env is not None:
            if name in env.bindings:
                return env.bindings[name]
            env = env.parent
        if self.receiver is not None and name in self.receiver.fields:
            return self.receiver.fields[name]
        self.interp.ensure_statics(self.owner)
        for sup in self.owner.all_supertypes():
            if name in sup.static_values:
                return sup.static_values[name]
        raise self.interp.runtime_error("NullPointerException", f"unknown name {name}")


def default_value(type_ref: J.TypeRef) -> object:
    if type_ref.array_dims:
        return None
    return {"int": 0, "double": 0.0, "boolean": False, "char": JChar("\0")}.get(type_ref.name)


def truthy(value: object) -> bool:
    if isinstance(value, bool):
        return value
    raise TypeError(f"condition is not boolean: {value!r}")


def to_jstring(value: object) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, JChar):
        return value.ch
    if isinstance(value, float):
        return repr(value) if value != int(value) else f"{value:.1f}"
    if isinstance(value, JmObject):
        return value.describe()
    if isinstance(value, JList):
        return "[" + ", ".join(to_jstring(i) for i in value.items) + "]"
    if isinstance(value, JStringBuilder):
        return "".join(value.parts)
    return str(value)


def to_plain_str(value: object) -> str:
    return value.ch if isinstance(value, JChar) else str(value)


def jm_equals(a: object, b: object, identity_for_objects: bool = False) -> bool:
    if isinstance(a, JmObject) or isinstance(b, JmObject):
        return a is b
    if isinstance(a, JChar) and isinstance(b, JChar):
        return a.ch == b.ch
    if isinstance(a, bool) != isinstance(b, bool):
        return False
    if identity_for_objects and (isinstance(a, (JList, JStringBuilder)) or isinstance(b, (JList, JStringBuilder))):
        return a is b
    if isinstance(a, JList) and isinstance(b, JList):
        return len(a.items) == len(b.items) and all(jm_equals(x, y) for x, y in zip(a.items, b.items))
    return a == b


# -- JUnit assert shim ---------------------------------------------------------

def _fmt(value: object) -> str:
    if isinstance(value, str):
        return f"<{value}>"
    return f"<{to_jstring(value)}>"


def _assert_equals(interp: Interpreter, args: list[object]) -> None:
    if len(args) == 3:
        message, expected, actual = args
    else:
        expected, actual = args
        message = None
    ok = jm_equals(expected, actual)
    if isinstance(expected, float) or isinstance(actual, float):
        ok = abs(float(expected) - float(actual)) < 1e-9
    if not ok:
        prefix = f"{message} " if message else ""
        raise interp.assertion_error(f"{prefix}expected:{_fmt(expected)} but was:{_fmt(actual)}")


def _assert_true(interp: Interpreter, args: list[object]) -> None:
    cond = args[-1]
    if cond is not True:
        raise interp.assertion_error(args[0] if len(args) == 2 else "expected true")


def _assert_false(interp: Interpreter, args: list[object]) -> None:
    cond = args[-1]
    if cond is not False:
        raise interp.assertion_error(args[0] if len(args) == 2 else "expected false")


def _assert_null(interp: Interpreter, args: list[object]) -> None:
    if args[-1] is not None:
        raise interp.assertion_error(f"expected null but was:{_fmt(args[-1])}")


def _assert_not_null(interp: Interpreter, args: list[object]) -> None:
    if args[-1] is None:
        raise interp.assertion_error("expected non-null value")


def _assert_same(interp: Interpreter, args: list[object]) -> None:
    if args[-2] is not args[-1]:
        raise interp.assertion_error("expected same instance")


def _fail(interp: Interpreter, args: list[object]) -> None:
    raise interp.assertion_error(str(args[0]) if args else "fail() called")


ASSERT_FUNCTIONS = {
    "assertEquals": _assert_equals,
    "assertTrue": _assert_true,
    "assertFalse": _assert_false,
    "assertNull": _assert_null,
    "assertNotNull": _assert_not_null,
    "assertSame": _assert_same,
    "fail": _fail,
}
