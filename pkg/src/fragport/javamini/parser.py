"""Recursive-descent parser for the supported Java subset.

Grammar (informal):

    unit      := package? import* classdecl+
    classdecl := mods ("class" | "interface") IDENT ("extends" qname)?
                 ("implements" qname ("," qname)*)? "{" member* "}"
    member    := classdecl | field | method | constructor
    field     := mods type IDENT ("=" expr)? ";"
    method    := mods (type | "void") IDENT "(" params ")" ("throws" qnames)? (block | ";")
    ctor      := mods IDENT "(" params ")" block

Statements: block, local declaration, if/else, while, classic for, return,
throw, try/catch, break, continue, expression statement.
Expressions: the usual precedence ladder down to primary, plus `new`,
`this(...)` / `super(...)` delegation, ternary, instanceof and casts.
"""

from __future__ import annotations

from fragport.errors import ParseError
from fragport.javamini import ast as J
from fragport.javamini.lexer import Token, tokenize

MODIFIER_WORDS = {"public", "private", "protected", "static", "final", "abstract"}
PRIMITIVE_TYPES = {"int", "boolean", "char", "double", "void", "long", "float", "short", "byte"}


class Parser:
    def __init__(self, source: str, file: str = "<source>"):
        self.source = source
        self.file = file
        self.tokens = tokenize(source, file)
        self.pos = 0

    # -- token helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def at_op(self, text: str) -> bool:
        return self.at("op", text)

    def at_kw(self, text: str) -> bool:
        return self.at("keyword", text)

    def take(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def expect(self, kind: str, text: str | None = None) -> Token:
        tok = self.peek()
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text or kind
            raise ParseError(f"expected {want!r}, found {tok.text!r}", file=self.file, line=tok.line)
        return self.take()

    def expect_op(self, text: str) -> Token:
        return self.expect("op", text)

    def span_from(self, start: Token, end: Token | None = None) -> J.Span:
        end = end or self.tokens[self.pos - 1]
        return J.Span(start.line, end.line, start.offset, end.end_offset)

    def token_span(self, tok: Token) -> J.Span:
        return J.Span(tok.line, tok.line, tok.offset, tok.end_offset)

    # -- top level ----------------------------------------------------------

    def parse_unit(self) -> J.CompilationUnit:
        package = None
        if self.at_kw("package"):
            self.take()
            package = self.qualified_name()
            self.expect_op(";")
        imports: list[str] = []
        while self.at_kw("import"):
            self.take()
            prefix = ""
            if self.at_kw("static"):
                self.take()
                prefix = "static "
            name = self.qualified_name(allow_star=True)
            self.expect_op(";")
            imports.append(prefix + name)
        classes: list[J.ClassDecl] = []
        while not self.at("eof"):
            classes.append(self.class_decl())
        if not classes:
            raise ParseError("no type declaration in file", file=self.file, line=1)
        return J.CompilationUnit(package, imports, classes, self.file, self.source)

    def qualified_name(self, allow_star: bool = False) -> str:
        parts = [self.expect("ident").text]
        while self.at_op("."):
            self.take()
            if allow_star and self.at_op("*"):
                self.take()
                parts.append("*")
                break
            parts.append(self.expect("ident").text)
        return ".".join(parts)

    def modifiers_and_annotations(self) -> tuple[list[str], list[str]]:
        mods: list[str] = []
        annotations: list[str] = []
        while True:
            if self.at_op("@"):
                self.take()
                annotations.append(self.qualified_name())
                if self.at_op("("):
                    depth = 0
                    while True:
                        tok = self.take()
                        if tok.kind == "op" and tok.text == "(":
                            depth += 1
                        elif tok.kind == "op" and tok.text == ")":
                            depth -= 1
                            if depth == 0:
                                break
                        elif tok.kind == "eof":
                            raise ParseError("unterminated annotation arguments", file=self.file, line=tok.line)
            elif self.peek().kind == "keyword" and self.peek().text in MODIFIER_WORDS:
                mods.append(self.take().text)
            else:
                return mods, annotations

    def class_decl(self) -> J.ClassDecl:
        start = self.peek()
        mods, annotations = self.modifiers_and_annotations()
        if self.at_kw("interface"):
            kind = "interface"
            self.take()
        else:
            self.expect("keyword", "class")
            kind = "class"
        name = self.expect("ident").text
        extends = None
        implements: list[str] = []
        if self.at_kw("extends"):
            self.take()
            extends = self.qualified_name()
        if self.at_kw("implements"):
            self.take()
            implements.append(self.qualified_name())
            while self.at_op(","):
                self.take()
                implements.append(self.qualified_name())
        self.expect_op("{")
        fields: list[J.FieldDecl] = []
        methods: list[J.MethodDecl] = []
        inners: list[J.ClassDecl] = []
        while not self.at_op("}"):
            member = self.member(class_name=name)
            if isinstance(member, J.ClassDecl):
                inners.append(member)
            elif isinstance(member, J.FieldDecl):
                fields.append(member)
            else:
                methods.append(member)
        close = self.expect_op("}")
        return J.ClassDecl(name, kind, mods, annotations, extends, implements,
                           fields, methods, inners, self.span_from(start, close))

    def member(self, class_name: str):
        start = self.peek()
        mods, annotations = self.modifiers_and_annotations()
        if self.at_kw("class") or self.at_kw("interface"):
            self.pos = self._index_of(start)
            return self.class_decl()
        # constructor: IDENT matching the class name followed by "("
        if self.at("ident", class_name) and self.peek(1).kind == "op" and self.peek(1).text == "(":
            name_tok = self.take()
            params = self.params()
            throws = self.throws_clause()
            body = self.block()
            return J.MethodDecl(class_name, params, None, mods, annotations, body,
                                self.span_from(start), self.token_span(name_tok),
                                is_constructor=True, throws=throws)
        type_ref = self.type_ref(allow_void=True)
        name_tok = self.expect("ident")
        if self.at_op("("):
            params = self.params()
            throws = self.throws_clause()
            if self.at_op(";"):
                self.take()
                body = None
            else:
                body = self.block()
            return J.MethodDecl(name_tok.text, params, type_ref, mods, annotations, body,
                                self.span_from(start), self.token_span(name_tok), throws=throws)
        init = None
        if self.at_op("="):
            self.take()
            init = self.expression()
        end = self.expect_op(";")
        return J.FieldDecl(name_tok.text, type_ref, mods, annotations, init, self.span_from(start, end))

    def _index_of(self, token: Token) -> int:
        for idx in range(len(self.tokens)):
            if self.tokens[idx] is token:
                return idx
        raise AssertionError("token not in stream")

    def throws_clause(self) -> list[str]:
        throws: list[str] = []
        if self.at_kw("throws"):
            self.take()
            throws.append(self.qualified_name())
            while self.at_op(","):
                self.take()
                throws.append(self.qualified_name())
        return throws

    def params(self) -> list[J.Param]:
        self.expect_op("(")
        params: list[J.Param] = []
        while not self.at_op(")"):
            if params:
                self.expect_op(",")
            if self.at_kw("final"):
                self.take()
            ptype = self.type_ref()
            pname = self.expect("ident").text
            params.append(J.Param(ptype, pname))
        self.expect_op(")")
        return params

    def type_ref(self, allow_void: bool = False) -> J.TypeRef:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES:
            if tok.text == "void" and not allow_void:
                raise ParseError("void is not a value type here", file=self.file, line=tok.line)
            self.take()
            name = tok.text
        else:
            name = self.qualified_name()
        type_args: list[J.TypeRef] = []
        if self.at_op("<"):
            self.take()
            if not self.at_op(">"):
                type_args.append(self.type_ref())
                while self.at_op(","):
                    self.take()
                    type_args.append(self.type_ref())
            self.expect_op(">")
        dims = 0
        while self.at_op("[") and self.peek(1).kind == "op" and self.peek(1).text == "]":
            self.take()
            self.take()
            dims += 1
        return J.TypeRef(name, type_args, dims)

    # -- statements -------------------------------------------------------

    def block(self) -> J.Block:
        start = self.expect_op("{")
        statements: list[J.Stmt] = []
        while not self.at_op("}"):
            statements.append(self.statement())
        end = self.expect_op("}")
        return J.Block(self.span_from(start, end), statements)

    def statement(self) -> J.Stmt:
        start = self.peek()
        if self.at_op("{"):
            return self.block()
        if self.at_kw("if"):
            self.take()
            self.expect_op("(")
            cond = self.expression()
            self.expect_op(")")
            then = self.statement()
            other = None
            if self.at_kw("else"):
                self.take()
                other = self.statement()
            return J.If(self.span_from(start), cond, then, other)
        if self.at_kw("while"):
            self.take()
            self.expect_op("(")
            cond = self.expression()
            self.expect_op(")")
            body = self.statement()
            return J.While(self.span_from(start), cond, body)
        if self.at_kw("for"):
            self.take()
            self.expect_op("(")
            init = None
            if not self.at_op(";"):
                init = self.simple_statement(consume_semi=False)
            self.expect_op(";")
            cond = None
            if not self.at_op(";"):
                cond = self.expression()
            self.expect_op(";")
            update = None
            if not self.at_op(")"):
                update = self.expression()
            self.expect_op(")")
            body = self.statement()
            return J.For(self.span_from(start), init, cond, update, body)
        if self.at_kw("return"):
            self.take()
            value = None
            if not self.at_op(";"):
                value = self.expression()
            end = self.expect_op(";")
            return J.Return(self.span_from(start, end), value)
        if self.at_kw("throw"):
            self.take()
            value = self.expression()
            end = self.expect_op(";")
            return J.Throw(self.span_from(start, end), value)
        if self.at_kw("break"):
            self.take()
            end = self.expect_op(";")
            return J.Break(self.span_from(start, end))
        if self.at_kw("continue"):
            self.take()
            end = self.expect_op(";")
            return J.Continue(self.span_from(start, end))
        if self.at_kw("try"):
            self.take()
            body = self.block()
            catches: list[J.Catch] = []
            while self.at_kw("catch"):
                self.take()
                self.expect_op("(")
                ctype = self.type_ref()
                cname = self.expect("ident").text
                self.expect_op(")")
                catches.append(J.Catch(ctype, cname, self.block()))
            if not catches:
                raise ParseError("try without catch", file=self.file, line=start.line)
            return J.Try(self.span_from(start), body, catches)
        stmt = self.simple_statement(consume_semi=True)
        return stmt

    def simple_statement(self, consume_semi: bool) -> J.Stmt:
        """Local declaration or expression statement (for-init reuses this)."""
        start = self.peek()
        if self._looks_like_declaration():
            vtype = self.type_ref()
            name = self.expect("ident").text
            init = None
            if self.at_op("="):
                self.take()
                init = self.expression()
            if consume_semi:
                end = self.expect_op(";")
                return J.LocalVar(self.span_from(start, end), vtype, name, init)
            return J.LocalVar(self.span_from(start), vtype, name, init)
        expr = self.expression()
        if consume_semi:
            end = self.expect_op(";")
            return J.ExprStmt(self.span_from(start, end), expr)
        return J.ExprStmt(self.span_from(start), expr)

    def _looks_like_declaration(self) -> bool:
        tok = self.peek()
        if tok.kind == "keyword" and tok.text in PRIMITIVE_TYPES and tok.text != "void":
            return True
        if tok.kind != "ident":
            return False
        # IDENT IDENT  ... | IDENT<...> IDENT | IDENT[] IDENT | Qualified.Name IDENT
        idx = self.pos
        depth = 0
        saw_name = False
        while idx < len(self.tokens):
            t = self.tokens[idx]
            if t.kind == "ident" and not saw_name:
                saw_name = True
                idx += 1
                continue
            if t.kind == "op" and t.text == "." and depth == 0:
                saw_name = False
                idx += 1
                continue
            if t.kind == "op" and t.text == "<":
                depth += 1
                idx += 1
                continue
            if t.kind == "op" and t.text == ">":
                depth -= 1
                idx += 1
                if depth == 0:
                    break
                continue
            if depth > 0:
                if t.kind in ("ident",) or (t.kind == "op" and t.text in (",", "[", "]")) or \
                   (t.kind == "keyword" and t.text in PRIMITIVE_TYPES):
                    idx += 1
                    continue
                return False
            break
        while idx + 1 < len(self.tokens) and self.tokens[idx].kind == "op" and self.tokens[idx].text == "[" \
                and self.tokens[idx + 1].text == "]":
            idx += 2
        return idx < len(self.tokens) and self.tokens[idx].kind == "ident"

    # -- expressions --------------------------------------------------------

    def expression(self) -> J.Expr:
        return self.assignment()

    def assignment(self) -> J.Expr:
        left = self.ternary()
        if self.peek().kind == "op" and self.peek().text in ("=", "+=", "-=", "*=", "/=", "%="):
            op = self.take().text
            value = self.assignment()
            if not isinstance(left, (J.Name, J.FieldAccess)):
                raise ParseError("invalid assignment target", file=self.file, line=self.peek().line)
            return J.Assign(J.Span(left.span.start_line, value.span.end_line,
                                   left.span.start_offset, value.span.end_offset), op, left, value)
        return left

    def ternary(self) -> J.Expr:
        cond = self.or_expr()
        if self.at_op("?"):
            self.take()
            then = self.expression()
            self.expect_op(":")
            other = self.expression()
            return J.Ternary(J.Span(cond.span.start_line, other.span.end_line,
                                    cond.span.start_offset, other.span.end_offset), cond, then, other)
        return cond

    def _binary_level(self, sub, ops: tuple[str, ...]) -> J.Expr:
        left = sub()
        while self.peek().kind == "op" and self.peek().text in ops:
            op = self.take().text
            right = sub()
            left = J.Binary(J.Span(left.span.start_line, right.span.end_line,
                                   left.span.start_offset, right.span.end_offset), op, left, right)
        return left

    def or_expr(self) -> J.Expr:
        return self._binary_level(self.and_expr, ("||",))

    def and_expr(self) -> J.Expr:
        return self._binary_level(self.equality, ("&&",))

    def equality(self) -> J.Expr:
        return self._binary_level(self.relational, ("==", "!="))

    def relational(self) -> J.Expr:
        left = self._binary_level(self.additive, ("<", "<=", ">", ">="))
        if self.at_kw("instanceof"):
            self.take()
            type_ref = self.type_ref()
            return J.InstanceOf(J.Span(left.span.start_line, left.span.end_line,
                                       left.span.start_offset, left.span.end_offset), left, type_ref)
        return left

    def additive(self) -> J.Expr:
        return self._binary_level(self.multiplicative, ("+", "-"))

    def multiplicative(self) -> J.Expr:
        return self._binary_level(self.unary, ("*", "/", "%"))

    def unary(self) -> J.Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text in ("!", "-"):
            self.take()
            operand = self.unary()
            return J.Unary(J.Span(tok.line, operand.span.end_line, tok.offset, operand.span.end_offset),
                           tok.text, operand)
        if tok.kind == "op" and tok.text in ("++", "--"):
            self.take()
            operand = self.unary()
            return J.IncDec(J.Span(tok.line, operand.span.end_line, tok.offset, operand.span.end_offset),
                            tok.text, operand)
        if tok.kind == "op" and tok.text == "(" and self._looks_like_cast():
            self.take()
            ctype = self.type_ref()
            self.expect_op(")")
            operand = self.unary()
            return J.Cast(J.Span(tok.line, operand.span.end_line, tok.offset, operand.span.end_offset),
                          ctype, operand)
        return self.postfix()

    def _looks_like_cast(self) -> bool:
        # "(" (primitive | UpperIdent) ")" followed by a primary-start token
        nxt = self.peek(1)
        after = None
        if nxt.kind == "keyword" and nxt.text in PRIMITIVE_TYPES and nxt.text != "void":
            if self.peek(2).kind == "op" and self.peek(2).text == ")":
                after = self.peek(3)
        elif nxt.kind == "ident" and nxt.text[:1].isupper():
            if self.peek(2).kind == "op" and self.peek(2).text == ")":
                after = self.peek(3)
        if after is None:
            return False
        return after.kind in ("ident", "int", "double", "string", "char") or \
            (after.kind == "keyword" and after.text in ("this", "new", "true", "false", "null")) or \
            (after.kind == "op" and after.text == "(")

    def postfix(self) -> J.Expr:
        expr = self.primary()
        while True:
            if self.at_op("."):
                self.take()
                name_tok = self.expect("ident")
                if self.at_op("("):
                    args = self.call_args()
                    end = self.tokens[self.pos - 1]
                    expr = J.Call(J.Span(expr.span.start_line, end.line, expr.span.start_offset, end.end_offset),
                                  expr, name_tok.text, args, self.token_span(name_tok))
                else:
                    expr = J.FieldAccess(J.Span(expr.span.start_line, name_tok.line,
                                                expr.span.start_offset, name_tok.end_offset),
                                         expr, name_tok.text)
            elif self.peek().kind == "op" and self.peek().text in ("++", "--"):
                tok = self.take()
                expr = J.IncDec(J.Span(expr.span.start_line, tok.line, expr.span.start_offset, tok.end_offset),
                                tok.text, expr)
            else:
                return expr

    def call_args(self) -> list[J.Expr]:
        self.expect_op("(")
        args: list[J.Expr] = []
        while not self.at_op(")"):
            if args:
                self.expect_op(",")
            args.append(self.expression())
        self.expect_op(")")
        return args

    def primary(self) -> J.Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.take()
            return J.Literal(self.token_span(tok), "int", int(tok.text.rstrip("Ll")))
        if tok.kind == "double":
            self.take()
            return J.Literal(self.token_span(tok), "double", float(tok.text.rstrip("FfDd")))
        if tok.kind == "string":
            self.take()
            return J.Literal(self.token_span(tok), "string", tok.text)
        if tok.kind == "char":
            self.take()
            return J.Literal(self.token_span(tok), "char", tok.text)
        if tok.kind == "keyword":
            if tok.text in ("true", "false"):
                self.take()
                return J.Literal(self.token_span(tok), "boolean", tok.text == "true")
            if tok.text == "null":
                self.take()
                return J.Literal(self.token_span(tok), "null", None)
            if tok.text == "this":
                self.take()
                if self.at_op("("):
                    args = self.call_args()
                    end = self.tokens[self.pos - 1]
                    return J.ThisCall(J.Span(tok.line, end.line, tok.offset, end.end_offset), args)
                return J.This(self.token_span(tok))
            if tok.text == "super":
                self.take()
                if self.at_op("("):
                    args = self.call_args()
                    end = self.tokens[self.pos - 1]
                    return J.SuperCall(J.Span(tok.line, end.line, tok.offset, end.end_offset), args)
                raise ParseError("super member access is not supported", file=self.file, line=tok.line)
            if tok.text == "new":
                self.take()
                type_start = self.peek()
                type_ref = self.type_ref()
                name_span = J.Span(type_start.line, type_start.line, type_start.offset,
                                   self.tokens[self.pos - 1].end_offset)
                args = self.call_args()
                end = self.tokens[self.pos - 1]
                return J.New(J.Span(tok.line, end.line, tok.offset, end.end_offset), type_ref, args, name_span)
            raise ParseError(f"unexpected keyword {tok.text!r}", file=self.file, line=tok.line)
        if tok.kind == "ident":
            self.take()
            if self.at_op("("):
                args = self.call_args()
                end = self.tokens[self.pos - 1]
                return J.Call(J.Span(tok.line, end.line, tok.offset, end.end_offset),
                              None, tok.text, args, self.token_span(tok))
            return J.Name(self.token_span(tok), tok.text)
        if tok.kind == "op" and tok.text == "(":
            self.take()
            inner = self.expression()
            self.expect_op(")")
            return inner
        raise ParseError(f"unexpected token {tok.text!r}", file=self.file, line=tok.line)


def parse_file(path, file_label: str | None = None) -> J.CompilationUnit:
    from pathlib import Path

    p = Path(path)
    return Parser(p.read_text(encoding="utf-8"), file_label or str(p)).parse_unit()


def parse_source(source: str, file: str = "<source>") -> J.CompilationUnit:
    return Parser(source, file).parse_unit()
