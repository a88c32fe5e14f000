"""Parsing, rendering, and classification of rewrite-system problems.

Problems use the s-expression section format served by the Cops problem
database::

    (VAR x y)
    (RULES f(x, y) -> g(x))
    (COMMENT free text)

Sections may appear in any order and whitespace between tokens is not
significant.  ``VAR`` declares variable names; every other identifier is a
function symbol, so an undeclared name is read as a constant rather than
rejected.  ``RULES`` holds ``lhs -> rhs`` pairs which may carry a condition
list (``| s == t, u == v``).  ``CONDITIONTYPE`` marks a problem as
conditional.  ``FUN``/``SIG`` signature sections are kept as raw text:
higher-order problems are detected by :func:`infer_category` but never
structurally parsed.

All types here are immutable; everything in this module is safe to call
concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import TYPE_CHECKING, Union

if TYPE_CHECKING:
    from .registry import ToolSpec

SECTION_KEYWORDS = frozenset({"VAR", "RULES", "COMMENT", "CONDITIONTYPE", "FUN", "SIG"})

# "->" and "==" match the identifier character class but are rule/condition
# separators; allowing them as names would make the grammar ambiguous.
RESERVED_TOKENS = frozenset({"->", "=="})

_PUNCT = "(),|"


class ParseError(ValueError):
    """Syntax or validation failure, with a 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Variable:
    name: str


@dataclass(frozen=True)
class Application:
    function: str
    arguments: tuple["Term", ...] = ()


Term = Union[Variable, Application]


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    conditions: tuple[tuple[Term, Term], ...] = ()


class ConditionType(str, Enum):
    ORIENTED = "ORIENTED"
    JOIN = "JOIN"
    SEMI_EQUATIONAL = "SEMI-EQUATIONAL"


class FormatCategory(str, Enum):
    TRS = "TRS"
    CTRS = "CTRS"
    HIGHER_ORDER = "HIGHER_ORDER"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class Problem:
    """A parsed problem plus the exact text it was parsed from.

    ``raw_source`` is what registered tools receive; it is never
    re-rendered.  ``raw_sections`` preserves FUN/SIG bodies verbatim so
    that rendering does not drop them.  Comments and raw sections are
    metadata: they round-trip through render/parse but are excluded from
    structural equality.
    """

    variables: frozenset[str]
    rules: tuple[Rule, ...]
    condition_type: ConditionType | None
    comments: tuple[str, ...]
    raw_source: str
    raw_sections: tuple[tuple[str, str], ...] = ()

    @classmethod
    def from_raw(cls, text: str) -> "Problem":
        """Wrap text that could not (or need not) be parsed.

        Execution only ever reads ``raw_source``, so unparseable input is
        still runnable; structure fields stay empty.
        """
        return cls(
            variables=frozenset(),
            rules=(),
            condition_type=None,
            comments=(),
            raw_source=text,
        )

    def same_structure(self, other: "Problem") -> bool:
        return (
            self.variables == other.variables
            and self.rules == other.rules
            and self.condition_type == other.condition_type
        )


@dataclass(frozen=True)
class SelectionWarning:
    """Advisory mismatch between a tool's category group and a problem."""

    tool_id: str
    tool_category: FormatCategory
    problem_category: FormatCategory

    @property
    def message(self) -> str:
        return (
            f"tool {self.tool_id} targets {self.tool_category.value} problems, "
            f"but the input looks like a {self.problem_category.value} problem"
        )


# ---------------------------------------------------------------------------
# Source scanning
# ---------------------------------------------------------------------------


class _SourceIndex:
    """Maps character offsets to 1-based (line, column) pairs."""

    def __init__(self, text: str):
        self._starts = [0]
        for i, ch in enumerate(text):
            if ch == "\n":
                self._starts.append(i + 1)

    def where(self, offset: int) -> tuple[int, int]:
        lo, hi = 0, len(self._starts) - 1
        while lo < hi:
            mid = (lo + hi + 1) // 2
            if self._starts[mid] <= offset:
                lo = mid
            else:
                hi = mid - 1
        return lo + 1, offset - self._starts[lo] + 1


@dataclass(frozen=True)
class _RawSection:
    keyword: str
    open_offset: int
    body_start: int
    body_end: int  # offset of the matching ")"


def _is_word_char(ch: str) -> bool:
    return not ch.isspace() and ch not in _PUNCT


def _scan_sections(text: str, index: _SourceIndex) -> list[_RawSection]:
    """Split source into top-level sections, enforcing balance and keywords."""
    sections: list[_RawSection] = []
    i, n = 0, len(text)
    while True:
        while i < n and text[i].isspace():
            i += 1
        if i >= n:
            break
        if text[i] != "(":
            raise ParseError(
                f"expected a section, found {text[i]!r}", *index.where(i)
            )
        open_offset = i
        i += 1
        while i < n and text[i].isspace():
            i += 1
        kw_start = i
        while i < n and _is_word_char(text[i]):
            i += 1
        keyword = text[kw_start:i]
        if not keyword:
            raise ParseError("missing section keyword", *index.where(kw_start))
        if keyword not in SECTION_KEYWORDS:
            raise ParseError(
                f"unknown section keyword {keyword!r}", *index.where(kw_start)
            )
        body_start = i
        depth = 1
        while i < n and depth:
            if text[i] == "(":
                depth += 1
            elif text[i] == ")":
                depth -= 1
            i += 1
        if depth:
            raise ParseError(
                f"unbalanced parentheses: {keyword} section is never closed",
                *index.where(open_offset),
            )
        sections.append(_RawSection(keyword, open_offset, body_start, i - 1))
    return sections


# ---------------------------------------------------------------------------
# Tokenizing and term/rule parsing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    text: str
    offset: int

    @property
    def is_punct(self) -> bool:
        return self.text in _PUNCT


def _tokenize(text: str, start: int, end: int) -> list[_Token]:
    tokens: list[_Token] = []
    i = start
    while i < end:
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _PUNCT:
            tokens.append(_Token(ch, i))
            i += 1
        else:
            word_start = i
            while i < end and _is_word_char(text[i]):
                i += 1
            tokens.append(_Token(text[word_start:i], word_start))
    return tokens


class _RulesParser:
    """Recursive-descent parser for the body of a RULES section.

    Shares the function-arity table across sections so that a symbol used
    with two different argument counts anywhere in the problem is rejected.
    """

    def __init__(
        self,
        tokens: list[_Token],
        end_offset: int,
        variables: frozenset[str],
        arities: dict[str, int],
        index: _SourceIndex,
    ):
        self._tokens = tokens
        self._pos = 0
        self._end_offset = end_offset
        self._variables = variables
        self._arities = arities
        self._index = index

    def _peek(self) -> _Token | None:
        if self._pos < len(self._tokens):
            return self._tokens[self._pos]
        return None

    def _next(self) -> _Token | None:
        tok = self._peek()
        if tok is not None:
            self._pos += 1
        return tok

    def _error(self, message: str, tok: _Token | None) -> ParseError:
        offset = tok.offset if tok is not None else self._end_offset
        return ParseError(message, *self._index.where(offset))

    def parse_rules(self) -> list[Rule]:
        rules = []
        while self._peek() is not None:
            rules.append(self._parse_rule())
        return rules

    def _parse_rule(self) -> Rule:
        start = self._peek()
        lhs = self._parse_term()
        arrow = self._next()
        if arrow is None or arrow.text != "->":
            raise self._error("rule without the '->' separator", arrow or start)
        rhs = self._parse_term()
        conditions: list[tuple[Term, Term]] = []
        nxt = self._peek()
        if nxt is not None and nxt.text == "|":
            self._next()
            conditions.append(self._parse_condition())
            while (tok := self._peek()) is not None and tok.text == ",":
                self._next()
                conditions.append(self._parse_condition())
        if isinstance(lhs, Variable):
            raise self._error(
                "left-hand side of a rule must not be a bare variable", start
            )
        return Rule(lhs, rhs, tuple(conditions))

    def _parse_condition(self) -> tuple[Term, Term]:
        left = self._parse_term()
        op = self._next()
        if op is None or op.text not in RESERVED_TOKENS:
            raise self._error(
                "malformed condition list: expected '==' or '->'", op
            )
        right = self._parse_term()
        return (left, right)

    def _parse_term(self) -> Term:
        tok = self._next()
        if tok is None or tok.is_punct or tok.text in RESERVED_TOKENS:
            raise self._error("expected a term", tok)
        nxt = self._peek()
        if nxt is not None and nxt.text == "(":
            if tok.text in self._variables:
                raise self._error(
                    f"variable {tok.text!r} used as a function symbol", tok
                )
            self._next()
            arguments = [self._parse_term()]
            while (sep := self._peek()) is not None and sep.text == ",":
                self._next()
                arguments.append(self._parse_term())
            closing = self._next()
            if closing is None or closing.text != ")":
                raise self._error(
                    "unbalanced parentheses in term argument list", closing
                )
            self._check_arity(tok, len(arguments))
            return Application(tok.text, tuple(arguments))
        if tok.text in self._variables:
            return Variable(tok.text)
        self._check_arity(tok, 0)
        return Application(tok.text, ())

    def _check_arity(self, tok: _Token, arity: int) -> None:
        previous = self._arities.setdefault(tok.text, arity)
        if previous != arity:
            raise self._error(
                f"function symbol {tok.text!r} used with arity {arity} "
                f"but previously with arity {previous}",
                tok,
            )


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------


def parse_problem(source: str) -> Problem:
    """Parse problem text into a :class:`Problem`.

    Raises :class:`ParseError` (with line/column) on unbalanced
    parentheses, unknown section keywords, rules missing the arrow
    separator, malformed condition lists, bare-variable left-hand sides,
    and inconsistent function arities.  The returned problem's
    ``raw_source`` is the input, byte for byte.
    """
    index = _SourceIndex(source)
    sections = _scan_sections(source, index)
    if not sections:
        raise ParseError("expected at least one section", *index.where(len(source)))

    variables: set[str] = set()
    condition_type: ConditionType | None = None
    comments: list[str] = []
    raw_sections: list[tuple[str, str]] = []

    for sec in sections:
        if sec.keyword == "VAR":
            for tok in _tokenize(source, sec.body_start, sec.body_end):
                if tok.is_punct:
                    raise ParseError(
                        f"unexpected {tok.text!r} in VAR section",
                        *index.where(tok.offset),
                    )
                if tok.text in RESERVED_TOKENS:
                    raise ParseError(
                        f"{tok.text!r} is reserved and cannot name a variable",
                        *index.where(tok.offset),
                    )
                variables.add(tok.text)
        elif sec.keyword == "CONDITIONTYPE":
            tokens = _tokenize(source, sec.body_start, sec.body_end)
            if len(tokens) != 1 or tokens[0].is_punct:
                raise ParseError(
                    "CONDITIONTYPE expects exactly one value",
                    *index.where(sec.body_start),
                )
            try:
                value = ConditionType(tokens[0].text)
            except ValueError:
                raise ParseError(
                    f"invalid CONDITIONTYPE {tokens[0].text!r} (expected "
                    "ORIENTED, JOIN, or SEMI-EQUATIONAL)",
                    *index.where(tokens[0].offset),
                ) from None
            if condition_type is not None:
                raise ParseError(
                    "duplicate CONDITIONTYPE section",
                    *index.where(sec.open_offset),
                )
            condition_type = value
        elif sec.keyword == "COMMENT":
            comments.append(source[sec.body_start : sec.body_end])
        elif sec.keyword in ("FUN", "SIG"):
            raw_sections.append((sec.keyword, source[sec.body_start : sec.body_end]))

    frozen_vars = frozenset(variables)
    arities: dict[str, int] = {}
    rules: list[Rule] = []
    for sec in sections:
        if sec.keyword != "RULES":
            continue
        tokens = _tokenize(source, sec.body_start, sec.body_end)
        parser = _RulesParser(tokens, sec.body_end, frozen_vars, arities, index)
        rules.extend(parser.parse_rules())

    return Problem(
        variables=frozen_vars,
        rules=tuple(rules),
        condition_type=condition_type,
        comments=tuple(comments),
        raw_source=source,
        raw_sections=tuple(raw_sections),
    )


def render_term(term: Term) -> str:
    if isinstance(term, Variable):
        return term.name
    if not term.arguments:
        return term.function
    args = ", ".join(render_term(a) for a in term.arguments)
    return f"{term.function}({args})"


def render_rule(rule: Rule) -> str:
    text = f"{render_term(rule.lhs)} -> {render_term(rule.rhs)}"
    if rule.conditions:
        conds = ", ".join(
            f"{render_term(left)} == {render_term(right)}"
            for left, right in rule.conditions
        )
        text = f"{text} | {conds}"
    return text


def render_problem(problem: Problem) -> str:
    """Emit canonical text; ``parse_problem(render_problem(p))`` preserves
    structure (variables, rules, condition type)."""
    parts: list[str] = []
    if problem.condition_type is not None:
        parts.append(f"(CONDITIONTYPE {problem.condition_type.value})")
    parts.append("(VAR " + " ".join(sorted(problem.variables)) + ")")
    if problem.rules:
        body = "\n".join(f"  {render_rule(rule)}" for rule in problem.rules)
        parts.append(f"(RULES\n{body}\n)")
    else:
        parts.append("(RULES )")
    for keyword, raw in problem.raw_sections:
        parts.append(f"({keyword}{_body_separator(raw)}{raw})")
    for comment in problem.comments:
        parts.append(f"(COMMENT{_body_separator(comment)}{comment})")
    return "\n".join(parts) + "\n"


def _body_separator(raw: str) -> str:
    # Parsed bodies keep their leading whitespace; hand-built ones may
    # not, and the keyword must not glue onto the body text.
    if raw and not raw[0].isspace() and raw[0] != "(":
        return " "
    return ""


def _scan_sections_tolerant(source: str) -> tuple[list[tuple[str, str]], bool]:
    """Best-effort section scan for classification: never raises.

    Returns (sections, clean); clean is False when the text has top-level
    garbage, a missing keyword, or an unclosed section.
    """
    sections: list[tuple[str, str]] = []
    clean = True
    i, n = 0, len(source)
    while True:
        while i < n and source[i].isspace():
            i += 1
        if i >= n:
            break
        if source[i] != "(":
            return sections, False
        i += 1
        while i < n and source[i].isspace():
            i += 1
        kw_start = i
        while i < n and _is_word_char(source[i]):
            i += 1
        keyword = source[kw_start:i]
        if not keyword:
            clean = False
        body_start = i
        depth = 1
        while i < n and depth:
            if source[i] == "(":
                depth += 1
            elif source[i] == ")":
                depth -= 1
            i += 1
        if depth:
            sections.append((keyword, source[body_start:n]))
            return sections, False
        sections.append((keyword, source[body_start : i - 1]))
    return sections, clean


def infer_category(source: str) -> FormatCategory:
    """Classify problem text by its declared sections.

    Total and deterministic; works on raw text without requiring a full
    parse.  A CONDITIONTYPE section means CTRS; typed variable
    declarations or arrow-typed FUN/SIG declarations mean HIGHER_ORDER; a
    well-formed problem using only VAR/RULES/COMMENT is TRS; everything
    else is UNKNOWN.
    """
    sections, clean = _scan_sections_tolerant(source)
    if any(kw == "CONDITIONTYPE" for kw, _ in sections):
        return FormatCategory.CTRS
    for keyword, body in sections:
        if keyword == "VAR" and ":" in body:
            return FormatCategory.HIGHER_ORDER
        if keyword in ("FUN", "SIG") and "->" in body:
            return FormatCategory.HIGHER_ORDER
    if (
        clean
        and sections
        and all(kw in ("VAR", "RULES", "COMMENT") for kw, _ in sections)
    ):
        return FormatCategory.TRS
    return FormatCategory.UNKNOWN


def _group_category(label: str) -> FormatCategory | None:
    """Map a registry group label to the problem category it targets.

    Returns None for groups that accept anything (commutation-style
    groups and labels we cannot interpret).
    """
    lowered = label.lower()
    if "ctrs" in lowered:
        return FormatCategory.CTRS
    tokens = {part for part in "".join(
        ch if ch.isalnum() else " " for ch in lowered
    ).split()}
    if "higher" in lowered or "hrs" in tokens or "ho" in tokens:
        return FormatCategory.HIGHER_ORDER
    if "trs" in lowered:
        return FormatCategory.TRS
    return None


def validate_selection(
    category: FormatCategory, tools: list["ToolSpec"]
) -> list[SelectionWarning]:
    """Advisory category check: one warning per incompatible tool.

    Never blocks execution.  UNKNOWN problems are compatible with every
    tool, and tools in groups without a recognizable category accept
    everything.
    """
    if category == FormatCategory.UNKNOWN:
        return []
    warnings = []
    for spec in tools:
        tool_category = _group_category(spec.category_group)
        if tool_category is not None and tool_category != category:
            warnings.append(
                SelectionWarning(
                    tool_id=spec.id,
                    tool_category=tool_category,
                    problem_category=category,
                )
            )
    return warnings
