"""AST node definitions for the supported Java subset.

Nodes carry source spans (1-based line numbers, 0-based character offsets)
because the transform stage rewrites files by exact spans and the schema
records fragment locations as line ranges.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Span:
    start_line: int
    end_line: int
    start_offset: int
    end_offset: int


@dataclass
class TypeRef:
    name: str                      # as written, e.g. "String", "ArrayList"
    type_args: list["TypeRef"] = field(default_factory=list)
    array_dims: int = 0

    def render(self) -> str:
        text = self.name
        if self.type_args:
            text += "<" + ", ".join(t.render() for t in self.type_args) + ">"
        text += "[]" * self.array_dims
        return text


# --- expressions ---------------------------------------------------------

@dataclass
class Expr:
    span: Span


@dataclass
class Literal(Expr):
    kind: str  # int | double | string | char | boolean | null
    value: object


@dataclass
class Name(Expr):
    ident: str


@dataclass
class This(Expr):
    pass


@dataclass
class FieldAccess(Expr):
    target: Expr
    name: str


@dataclass
class Call(Expr):
    target: Expr | None      # None for unqualified calls
    name: str
    args: list[Expr]
    name_span: Span = None   # span of just the method-name token


@dataclass
class New(Expr):
    type: TypeRef
    args: list[Expr]
    name_span: Span = None   # span of the class-name token after `new`


@dataclass
class ThisCall(Expr):
    """Constructor delegation `this(arg, ...)`, valid only as a first statement."""
    args: list[Expr]


@dataclass
class SuperCall(Expr):
    args: list[Expr]


@dataclass
class Unary(Expr):
    op: str
    operand: Expr


@dataclass
class Binary(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass
class Assign(Expr):
    op: str                  # =, +=, -=, *=, /=, %=
    target: Expr             # Name or FieldAccess
    value: Expr


@dataclass
class Ternary(Expr):
    cond: Expr
    then: Expr
    other: Expr


@dataclass
class IncDec(Expr):
    op: str                  # ++ or --
    target: Expr


@dataclass
class InstanceOf(Expr):
    operand: Expr
    type: TypeRef


@dataclass
class Cast(Expr):
    type: TypeRef
    operand: Expr


# --- statements ----------------------------------------------------------

@dataclass
class Stmt:
    span: Span


@dataclass
class Block(Stmt):
    statements: list[Stmt]


@dataclass
class LocalVar(Stmt):
    type: TypeRef
    name: str
    init: Expr | None


@dataclass
class ExprStmt(Stmt):
    expr: Expr


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    other: Stmt | None


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt


@dataclass
class For(Stmt):
    init: Stmt | None
    cond: Expr | None
    update: Expr | None
    body: Stmt


@dataclass
class Return(Stmt):
    value: Expr | None


@dataclass
class Throw(Stmt):
    value: Expr


@dataclass
class Try(Stmt):
    body: Block
    catches: list["Catch"]


@dataclass
class Catch:
    type: TypeRef
    name: str
    body: Block


@dataclass
class Break(Stmt):
    pass


@dataclass
class Continue(Stmt):
    pass


# --- declarations --------------------------------------------------------

@dataclass
class Param:
    type: TypeRef
    name: str


@dataclass
class FieldDecl:
    name: str
    type: TypeRef
    modifiers: list[str]
    annotations: list[str]
    init: Expr | None
    span: Span


@dataclass
class MethodDecl:
    name: str
    params: list[Param]
    return_type: TypeRef | None   # None for constructors
    modifiers: list[str]
    annotations: list[str]
    body: Block | None            # None for abstract/interface methods
    span: Span
    name_span: Span
    is_constructor: bool = False
    throws: list[str] = field(default_factory=list)

    @property
    def is_static(self) -> bool:
        return "static" in self.modifiers

    @property
    def is_abstract(self) -> bool:
        return "abstract" in self.modifiers or self.body is None

    def signature(self) -> str:
        return f"{self.name}({','.join(p.type.render() for p in self.params)})"


@dataclass
class ClassDecl:
    name: str
    kind: str                     # class | interface
    modifiers: list[str]
    annotations: list[str]
    extends: str | None
    implements: list[str]
    fields: list[FieldDecl]
    methods: list[MethodDecl]
    inner_classes: list["ClassDecl"]
    span: Span

    @property
    def is_abstract(self) -> bool:
        return self.kind == "interface" or "abstract" in self.modifiers


@dataclass
class CompilationUnit:
    package: str | None
    imports: list[str]            # as written, e.g. "java.util.ArrayList", "static org.junit.Assert.*"
    classes: list[ClassDecl]
    file: str
    source: str
