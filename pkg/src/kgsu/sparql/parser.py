"""Parser for the SPARQL subset.

Covers SELECT / CONSTRUCT forms with basic graph patterns, GRAPH blocks
(IRI or variable), OPTIONAL, FILTER (`!=`, NOT IN, !, &&, STRSTARTS over
STR, isIRI, EXISTS / NOT EXISTS), VALUES over one variable, the `+`
property path on a single IRI, DISTINCT, ORDER BY variables, and LIMIT.
Keywords are case-insensitive; variables are case-sensitive. Anything
else raises Unsupported naming the offending feature.
"""

from __future__ import annotations

from kgsu.model import Iri, Literal
from kgsu.namespaces import RDF_TYPE, XSD_BOOLEAN, XSD_STRING
from kgsu.sparql.ast import (
    And,
    Bgp,
    ConstructQuery,
    Exists,
    Filter,
    Graph,
    Group,
    IsIri,
    Not,
    NotEquals,
    NotIn,
    Optional_,
    PathOneOrMore,
    SelectQuery,
    StrStarts,
    TriplePattern,
    Unsupported,
    Values,
    Var,
)
from kgsu.trig import (
    BNODE_LABEL,
    EOF,
    IRIREF,
    KEYWORD,
    LANGTAG,
    NUMBER,
    PNAME,
    PUNCT,
    STRING,
    ParseError,
    PrefixTable,
    Token,
    Tokenizer,
    _PN_LOCAL_RE,
)

VAR = "VAR"

_WORD_CHARS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_"

_UNSUPPORTED_KEYWORDS = {
    "UNION", "MINUS", "BIND", "SERVICE", "ASK", "DESCRIBE", "INSERT", "DELETE",
    "OFFSET", "HAVING", "REDUCED", "FROM", "UNDEF", "REGEX", "GROUP",
}


class SparqlTokenizer(Tokenizer):
    def next_token(self) -> Token:
        self._skip_ws_and_comments()
        if self.pos >= len(self.text):
            return Token(EOF, "", self.line, self.column)
        line, column = self.line, self.column
        ch = self.text[self.pos]
        if ch in "?$":
            self._advance()
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos] in _WORD_CHARS:
                self._advance()
            name = self.text[start : self.pos]
            if not name:
                raise self.error("empty variable name", line, column)
            return Token(VAR, name, line, column)
        if ch == "!" and self.text[self.pos : self.pos + 2] == "!=":
            self._advance(2)
            return Token(PUNCT, "!=", line, column)
        if ch == "&":
            if self.text[self.pos : self.pos + 2] == "&&":
                self._advance(2)
                return Token(PUNCT, "&&", line, column)
            raise self.error("expected '&&'", line, column)
        if ch in "!*=|":
            self._advance()
            return Token(PUNCT, ch, line, column)
        return super().next_token()

    def _name_or_keyword(self, line, column) -> Token:
        text, pos = self.text, self.pos
        start = pos
        while pos < len(text) and text[pos] in _WORD_CHARS:
            pos += 1
        word = text[start:pos]
        if pos < len(text) and text[pos] == ":":
            self._advance(len(word) + 1)
            local_match = _PN_LOCAL_RE.match(self.text, self.pos)
            local = local_match.group(0) if local_match else ""
            self._advance(len(local))
            return Token(PNAME, word, line, column, extra=local)
        if not word:
            raise self.error(f"unexpected character {text[pos]!r}")
        self._advance(len(word))
        return Token(KEYWORD, word, line, column)


class _QueryParser:
    def __init__(self, text: str):
        self.tokenizer = SparqlTokenizer(text)
        self.prefixes = PrefixTable()
        self.token = self.tokenizer.next_token()

    def _next(self):
        self.token = self.tokenizer.next_token()

    def _err(self, message: str) -> ParseError:
        return self.tokenizer.error(message, self.token.line, self.token.column)

    def _is_kw(self, *words) -> bool:
        return self.token.kind == KEYWORD and self.token.value.upper() in words

    def _expect_kw(self, word: str):
        if not self._is_kw(word):
            raise self._err(f"expected {word}, found {self.token.value!r}")
        self._next()

    def _is_punct(self, value) -> bool:
        return self.token.kind == PUNCT and self.token.value == value

    def _expect_punct(self, value: str):
        if not self._is_punct(value):
            raise self._err(f"expected {value!r}, found {self.token.value!r}")
        self._next()

    def _check_supported(self):
        if self.token.kind == KEYWORD and self.token.value.upper() in _UNSUPPORTED_KEYWORDS:
            raise Unsupported(self.token.value.upper())

    # top level ------------------------------------------------------

    def parse(self):
        while self._is_kw("PREFIX", "BASE"):
            if self._is_kw("BASE"):
                raise Unsupported("BASE")
            self._next()
            if self.token.kind != PNAME or self.token.extra:
                raise self._err("expected prefix label")
            label = self.token.value
            self._next()
            if self.token.kind != IRIREF:
                raise self._err("expected namespace IRI")
            self.prefixes.bind(label, self.token.value)
            self._next()
        self._check_supported()
        if self._is_kw("SELECT"):
            return self._select()
        if self._is_kw("CONSTRUCT"):
            return self._construct()
        raise self._err(f"expected SELECT or CONSTRUCT, found {self.token.value!r}")

    def _select(self):
        self._next()
        distinct = False
        if self._is_kw("DISTINCT"):
            distinct = True
            self._next()
        if self._is_kw("REDUCED"):
            raise Unsupported("REDUCED")
        projection = None
        if self._is_punct("*"):
            self._next()
        else:
            projection = []
            while self.token.kind == VAR:
                projection.append(Var(self.token.value))
                self._next()
            if not projection:
                raise self._err("expected projection variables or *")
            if self._is_punct("("):
                raise Unsupported("projection expressions")
        if self._is_kw("WHERE"):
            self._next()
        where = self._group()
        order_by, limit = self._modifiers()
        return SelectQuery(
            prefixes=dict(self.prefixes.items()),
            distinct=distinct,
            projection=projection,
            where=where,
            order_by=order_by,
            limit=limit,
        )

    def _construct(self):
        self._next()
        self._expect_punct("{")
        template = []
        while not self._is_punct("}"):
            if self.token.kind == EOF:
                raise self._err("unclosed CONSTRUCT template")
            template.extend(self._triples_same_subject(allow_paths=False))
            while self._is_punct("."):
                self._next()
        self._next()
        if self._is_kw("WHERE"):
            self._next()
        where = self._group()
        order_by, limit = self._modifiers()
        return ConstructQuery(
            prefixes=dict(self.prefixes.items()),
            template=template,
            where=where,
            order_by=order_by,
            limit=limit,
        )

    def _modifiers(self):
        order_by: list = []
        limit = None
        while True:
            self._check_supported()
            if self._is_kw("ORDER"):
                self._next()
                self._expect_kw("BY")
                if self._is_kw("ASC", "DESC"):
                    raise Unsupported(self.token.value.upper())
                while self.token.kind == VAR:
                    order_by.append(Var(self.token.value))
                    self._next()
                if not order_by:
                    raise self._err("ORDER BY requires at least one variable")
            elif self._is_kw("LIMIT"):
                self._next()
                if self.token.kind != NUMBER or not self.token.value.isdigit():
                    raise self._err("LIMIT expects a non-negative integer")
                limit = int(self.token.value)
                self._next()
            elif self.token.kind == EOF:
                return order_by, limit
            else:
                raise self._err(f"unexpected token {self.token.value!r} after query body")

    # group graph patterns --------------------------------------------

    def _group(self) -> Group:
        self._expect_punct("{")
        group = Group()
        bgp = None
        while not self._is_punct("}"):
            if self.token.kind == EOF:
                raise self._err("unclosed group")
            self._check_supported()
            if self._is_kw("OPTIONAL"):
                self._next()
                group.items.append(Optional_(self._group()))
                bgp = None
            elif self._is_kw("GRAPH"):
                self._next()
                name = self._graph_name()
                group.items.append(Graph(name, self._group()))
                bgp = None
            elif self._is_kw("FILTER"):
                self._next()
                group.items.append(Filter(self._constraint()))
            elif self._is_kw("VALUES"):
                self._next()
                group.items.append(self._values())
                bgp = None
            elif self._is_punct("{"):
                inner = self._group()
                if self._is_kw("UNION"):
                    raise Unsupported("UNION")
                group.items.append(inner)
                bgp = None
            elif self._is_kw("SELECT"):
                raise Unsupported("subquery")
            else:
                patterns = self._triples_same_subject(allow_paths=True)
                if bgp is None:
                    bgp = Bgp(patterns=[])
                    group.items.append(bgp)
                bgp.patterns.extend(patterns)
            while self._is_punct("."):
                self._next()
        self._next()
        return group

    def _graph_name(self):
        tok = self.token
        if tok.kind == VAR:
            self._next()
            return Var(tok.value)
        if tok.kind == IRIREF:
            self._next()
            return self._iri(tok)
        if tok.kind == PNAME:
            self._next()
            return self._pname(tok)
        raise self._err("expected graph name (IRI or variable)")

    def _values(self) -> Values:
        if self.token.kind != VAR:
            raise Unsupported("VALUES over multiple variables")
        var = Var(self.token.value)
        self._next()
        self._expect_punct("{")
        terms = []
        while not self._is_punct("}"):
            if self.token.kind == EOF:
                raise self._err("unclosed VALUES block")
            if self._is_kw("UNDEF"):
                raise Unsupported("UNDEF")
            terms.append(self._term())
        self._next()
        return Values(var=var, terms=terms)

    # triples ----------------------------------------------------------

    def _triples_same_subject(self, allow_paths: bool) -> list:
        patterns = []
        subject = self._var_or_term(position="subject")
        while True:
            predicate = self._verb(allow_paths)
            while True:
                obj = self._var_or_term(position="object")
                patterns.append(TriplePattern(subject, predicate, obj))
                if self._is_punct(","):
                    self._next()
                    continue
                break
            if self._is_punct(";"):
                self._next()
                if self._is_punct(".") or self._is_punct("}") or self.token.kind == EOF:
                    return patterns
                continue
            return patterns

    def _verb(self, allow_paths: bool):
        tok = self.token
        if tok.kind == KEYWORD and tok.value == "a":
            self._next()
            return Iri(RDF_TYPE)
        if tok.kind == VAR:
            self._next()
            return Var(tok.value)
        if tok.kind in (IRIREF, PNAME):
            self._next()
            iri = self._iri(tok) if tok.kind == IRIREF else self._pname(tok)
            if self._is_punct("+"):
                if not allow_paths:
                    raise Unsupported("property path in CONSTRUCT template")
                self._next()
                return PathOneOrMore(iri)
            if self._is_punct("*") or self._is_punct("|") or self._is_punct("^"):
                raise Unsupported(f"property path operator {self.token.value!r}")
            return iri
        raise self._err(f"expected predicate, found {tok.value!r}")

    def _var_or_term(self, position: str):
        tok = self.token
        if tok.kind == VAR:
            self._next()
            return Var(tok.value)
        if tok.kind == BNODE_LABEL or self._is_punct("["):
            raise Unsupported("blank nodes in query patterns")
        try:
            return self._term()
        except ParseError:
            raise self._err(f"expected {position}, found {tok.value!r}")

    def _term(self):
        tok = self.token
        if tok.kind == IRIREF:
            self._next()
            return self._iri(tok)
        if tok.kind == PNAME:
            self._next()
            return self._pname(tok)
        if tok.kind == STRING:
            self._next()
            if self.token.kind == LANGTAG:
                tag = self.token.value
                self._next()
                return Literal(tok.value, language=tag)
            if self._is_punct("^^"):
                self._next()
                dt_tok = self.token
                if dt_tok.kind == IRIREF:
                    self._next()
                    datatype = self._iri(dt_tok).value
                elif dt_tok.kind == PNAME:
                    self._next()
                    datatype = self._pname(dt_tok).value
                else:
                    raise self._err("expected datatype IRI")
                return Literal(tok.value) if datatype == XSD_STRING else Literal(tok.value, datatype=datatype)
            return Literal(tok.value)
        if tok.kind == NUMBER:
            self._next()
            return Literal(tok.value, datatype=tok.extra)
        if tok.kind == KEYWORD and tok.value.lower() in ("true", "false"):
            self._next()
            return Literal(tok.value.lower(), datatype=XSD_BOOLEAN)
        raise self._err(f"expected term, found {tok.value!r}")

    def _iri(self, tok) -> Iri:
        try:
            return Iri(tok.value)
        except ValueError as exc:
            raise ParseError(tok.line, tok.column, str(exc))

    def _pname(self, tok) -> Iri:
        try:
            value = self.prefixes.expand(tok.value, tok.extra or "")
        except KeyError as exc:
            raise ParseError(tok.line, tok.column, str(exc).strip("'"))
        try:
            return Iri(value)
        except ValueError as exc:
            raise ParseError(tok.line, tok.column, str(exc))

    # filter expressions ------------------------------------------------

    def _constraint(self):
        if self._is_punct("("):
            self._next()
            expr = self._expr()
            self._expect_punct(")")
            return expr
        return self._unary()

    def _expr(self):
        left = self._unary()
        while self._is_punct("&&"):
            self._next()
            left = And(left, self._unary())
        if self._is_punct("|"):
            raise Unsupported("||")
        return left

    def _unary(self):
        if self._is_punct("!"):
            self._next()
            return Not(self._unary())
        if self._is_kw("NOT"):
            self._next()
            if self._is_kw("EXISTS"):
                self._next()
                return Not(Exists(self._group()))
            raise self._err("expected EXISTS after NOT")
        return self._relational()

    def _relational(self):
        left = self._primary()
        if self._is_punct("!="):
            self._next()
            return NotEquals(left, self._primary())
        if self._is_punct("="):
            raise Unsupported("= comparison")
        if self._is_kw("NOT"):
            self._next()
            self._expect_kw("IN")
            return NotIn(left, self._term_list())
        if self._is_kw("IN"):
            raise Unsupported("IN")
        return left

    def _term_list(self) -> list:
        self._expect_punct("(")
        terms = []
        while not self._is_punct(")"):
            if self.token.kind == EOF:
                raise self._err("unclosed term list")
            terms.append(self._term())
            if self._is_punct(","):
                self._next()
        self._next()
        return terms

    def _primary(self):
        if self._is_punct("("):
            self._next()
            expr = self._expr()
            self._expect_punct(")")
            return expr
        if self._is_kw("STRSTARTS"):
            self._next()
            self._expect_punct("(")
            self._expect_kw("STR")
            self._expect_punct("(")
            arg = self._operand()
            self._expect_punct(")")
            self._expect_punct(",")
            prefix = self._term()
            if not isinstance(prefix, Literal):
                raise self._err("STRSTARTS prefix must be a string literal")
            self._expect_punct(")")
            return StrStarts(arg, prefix)
        if self._is_kw("STR"):
            raise Unsupported("STR outside STRSTARTS")
        if self._is_kw("ISIRI", "ISURI"):
            self._next()
            self._expect_punct("(")
            arg = self._operand()
            self._expect_punct(")")
            return IsIri(arg)
        if self._is_kw("EXISTS"):
            self._next()
            return Exists(self._group())
        if self.token.kind == KEYWORD and self.token.value.lower() not in ("true", "false"):
            raise Unsupported(f"function {self.token.value}")
        return self._operand()

    def _operand(self):
        if self.token.kind == VAR:
            var = Var(self.token.value)
            self._next()
            return var
        return self._term()


def parse_query(text: str):
    """Parse a query; raises ParseError (with position) or Unsupported."""
    parser = _QueryParser(text)
    ast = parser.parse()
    return ast
