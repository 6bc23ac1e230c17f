"""Forward-chaining rule engine over partially known model invariants.

A model record carries the numeric invariants of a pair (ambient manifold,
distinguished rational curve): e counts the family's curves through two
general points, e0 through one point with a general tangent direction,
etilde is the minimum of e over covers etale along the curve, b the degree
of the formal-function field extension, and ex the minimum of e over
blow-up models.  Flags (g3, rational, unirational, strongly_rational) are
tristate: True, False, or unknown (None).  The engine only derives, never
guesses; contradictions are first-class results carrying a witness, so a
front end can print the offending rule and fields.

Invariants whose geometric definitions live outside this toolkit (formal
completions, Hilbert and Chow families) appear only through these recorded
integers.

Rules:
  R1   e = etilde * b
  R2   e0 <= etilde <= e (with squeezes when the bounds pinch)
  R3   g3 holds exactly when etilde = e
  R4   e = 1 implies rational
  R5   e0 = 1 implies unirational
  R6   e = 1 implies g3
  R7   strongly_rational implies rational
  R8   ex = 1 implies rational
  R9   rational implies unirational
  R10  rational implies ex = 1
"""

from __future__ import annotations

from dataclasses import dataclass, replace

INT_FIELDS = ("dim", "e", "e0", "etilde", "b", "ex")
FLAG_FIELDS = ("g3", "rational", "unirational", "strongly_rational")


@dataclass(frozen=True)
class ModelRecord:
    name: str
    dim: int | None = None
    e: int | None = None
    e0: int | None = None
    etilde: int | None = None
    b: int | None = None
    ex: int | None = None
    g3: bool | None = None
    rational: bool | None = None
    unirational: bool | None = None
    strongly_rational: bool | None = None
    provenance: tuple[tuple[str, str], ...] = ()

    def __post_init__(self):
        for name in INT_FIELDS:
            value = getattr(self, name)
            if value is not None and value < 1:
                raise ValueError(f"{name} must be a positive integer")

    def known_fields(self) -> dict[str, int | bool]:
        known = {}
        for name in INT_FIELDS + FLAG_FIELDS:
            value = getattr(self, name)
            if value is not None:
                known[name] = value
        return known

    def note(self, field_name: str) -> str | None:
        for key, text in self.provenance:
            if key == field_name:
                return text
        return None


@dataclass(frozen=True)
class RuleFiring:
    rule: str
    inputs: tuple[str, ...]
    derived: str


@dataclass(frozen=True)
class Contradiction:
    rule: str
    fields: tuple[str, ...]
    detail: str


@dataclass(frozen=True)
class PropagationResult:
    record: ModelRecord
    firings: tuple[RuleFiring, ...]
    contradiction: Contradiction | None

    @property
    def consistent(self) -> bool:
        return self.contradiction is None


@dataclass(frozen=True)
class ConsistencyReport:
    record: ModelRecord
    firings: tuple[RuleFiring, ...]
    contradiction: Contradiction | None
    derived: tuple[str, ...]

    @property
    def violations(self) -> tuple[str, ...]:
        if self.contradiction is None:
            return ()
        return (f"{self.contradiction.rule}: {self.contradiction.detail}",)


class _Engine:
    def __init__(self, record: ModelRecord):
        self.record = record
        self.firings: list[RuleFiring] = []
        self.contradiction: Contradiction | None = None

    def get(self, name):
        return getattr(self.record, name)

    def set(self, rule: str, inputs: tuple[str, ...], name: str, value) -> bool:
        current = self.get(name)
        if current is None:
            note = f"derived by {rule}"
            self.record = replace(
                self.record,
                **{name: value},
                provenance=self.record.provenance + ((name, note),),
            )
            self.firings.append(RuleFiring(rule, inputs, f"{name} = {value}"))
            return True
        if current != value:
            self.contradiction = Contradiction(
                rule,
                inputs + (name,),
                f"{name} = {current} conflicts with derived {name} = {value}",
            )
            self.firings.append(RuleFiring(rule, inputs, "contradiction"))
        return False

    def fail(self, rule: str, fields: tuple[str, ...], detail: str) -> None:
        self.contradiction = Contradiction(rule, fields, detail)
        self.firings.append(RuleFiring(rule, fields, "contradiction"))

    def run(self) -> PropagationResult:
        changed = True
        while changed and self.contradiction is None:
            changed = False
            # R3 and R2 run before R1 so that a violated biconditional or
            # ordering is witnessed as such, not as a divisibility failure.
            for rule in (
                self._r3, self._r2, self._r1, self._r4, self._r5,
                self._r6, self._r7, self._r8, self._r9, self._r10,
            ):
                changed = rule() or changed
                if self.contradiction is not None:
                    break
        return PropagationResult(self.record, tuple(self.firings), self.contradiction)

    def _r1(self) -> bool:
        e, etilde, b = self.get("e"), self.get("etilde"), self.get("b")
        if e is not None and etilde is not None and b is not None:
            if e != etilde * b:
                self.fail("R1", ("e", "etilde", "b"),
                          f"e = {e} but etilde * b = {etilde * b}")
            return False
        if etilde is not None and b is not None:
            return self.set("R1", ("etilde", "b"), "e", etilde * b)
        if e is not None and etilde is not None:
            if e % etilde != 0 or e < etilde:
                self.fail("R1", ("e", "etilde"),
                          f"etilde = {etilde} does not divide e = {e} with integer quotient")
                return False
            return self.set("R1", ("e", "etilde"), "b", e // etilde)
        if e is not None and b is not None:
            if e % b != 0 or e < b:
                self.fail("R1", ("e", "b"),
                          f"b = {b} does not divide e = {e} with integer quotient")
                return False
            return self.set("R1", ("e", "b"), "etilde", e // b)
        return False

    def _r2(self) -> bool:
        e, e0, etilde = self.get("e"), self.get("e0"), self.get("etilde")
        if e0 is not None and etilde is not None and e0 > etilde:
            self.fail("R2", ("e0", "etilde"), f"e0 = {e0} exceeds etilde = {etilde}")
            return False
        if etilde is not None and e is not None and etilde > e:
            self.fail("R2", ("etilde", "e"), f"etilde = {etilde} exceeds e = {e}")
            return False
        if e0 is not None and e is not None and e0 > e:
            self.fail("R2", ("e0", "e"), f"e0 = {e0} exceeds e = {e}")
            return False
        changed = False
        if e == 1:
            changed = self.set("R2", ("e",), "etilde", 1) or changed
            if self.contradiction is None:
                changed = self.set("R2", ("e",), "e0", 1) or changed
        if self.contradiction is None and etilde == 1:
            changed = self.set("R2", ("etilde",), "e0", 1) or changed
        if self.contradiction is None and e0 is not None and e is not None and e0 == e:
            changed = self.set("R2", ("e0", "e"), "etilde", e0) or changed
        return changed

    def _r3(self) -> bool:
        e, etilde, g3 = self.get("e"), self.get("etilde"), self.get("g3")
        if e is not None and etilde is not None:
            return self.set("R3", ("etilde", "e"), "g3", etilde == e)
        if g3 is True and e is not None:
            return self.set("R3", ("g3", "e"), "etilde", e)
        if g3 is True and etilde is not None:
            return self.set("R3", ("g3", "etilde"), "e", etilde)
        return False

    def _r4(self) -> bool:
        if self.get("e") == 1:
            return self.set("R4", ("e",), "rational", True)
        return False

    def _r5(self) -> bool:
        if self.get("e0") == 1:
            return self.set("R5", ("e0",), "unirational", True)
        return False

    def _r6(self) -> bool:
        if self.get("e") == 1:
            return self.set("R6", ("e",), "g3", True)
        return False

    def _r7(self) -> bool:
        if self.get("strongly_rational") is True:
            return self.set("R7", ("strongly_rational",), "rational", True)
        return False

    def _r8(self) -> bool:
        if self.get("ex") == 1:
            return self.set("R8", ("ex",), "rational", True)
        return False

    def _r9(self) -> bool:
        if self.get("rational") is True:
            return self.set("R9", ("rational",), "unirational", True)
        return False

    def _r10(self) -> bool:
        if self.get("rational") is True:
            return self.set("R10", ("rational",), "ex", 1)
        return False


def propagate(record: ModelRecord) -> PropagationResult:
    """Run the rules to a fixed point; derivation order is deterministic."""
    return _Engine(record).run()


def check_record(record: ModelRecord) -> ConsistencyReport:
    """Propagate without touching the input and report what was derived."""
    result = propagate(record)
    before = set(record.known_fields())
    derived = tuple(
        f"{name} = {value}"
        for name, value in sorted(result.record.known_fields().items())
        if name not in before
    )
    return ConsistencyReport(result.record, result.firings, result.contradiction, derived)


def projective_space_record(n: int | None = None) -> ModelRecord:
    return ModelRecord(
        name="projective-space-line",
        dim=n,
        e=1,
        provenance=(("e", "two points lie on a single line"),),
    )


def cubic_conic_record() -> ModelRecord:
    return ModelRecord(
        name="cubic-threefold-conic",
        dim=3,
        e=6,
        e0=6,
        rational=False,
        provenance=(
            ("e", "computed by the seeded line-count certificate"),
            ("e0", "recorded tangent-direction count, not recomputed here"),
            ("rational", "classical non-rationality of the smooth cubic threefold"),
        ),
    )


def toric_quotient_record(n: int = 2) -> ModelRecord:
    """Quotient of projective n-space by the cyclic group of order n+1."""
    if n < 2:
        raise ValueError("the quotient family needs n >= 2")
    return ModelRecord(
        name=f"toric-quotient-{n}",
        dim=n,
        e0=1,
        e=n + 1,
        b=n + 1,
        provenance=(
            ("e0", "pulled back from the projective cover, one curve per direction"),
            ("e", "cover degree times the count upstairs"),
            ("b", "degree of the covering etale along the curve"),
        ),
    )


def cotangent_bundle_record(r: int = 2) -> ModelRecord:
    """Projectivised cotangent bundle of projective r-space with an
    almost-line; a single curve of the family joins two general points."""
    if r < 2:
        raise ValueError("the cotangent family needs r >= 2")
    return ModelRecord(
        name=f"cotangent-bundle-{r}",
        dim=2 * r - 1,
        e=1,
        g3=True,
        provenance=(
            ("e", "unique curve through two general points of the bundle"),
            ("g3", "follows from e = 1"),
        ),
    )


BUILTIN_RECORDS = {
    "pn-line": projective_space_record,
    "cubic-conic": cubic_conic_record,
    "toric-quotient": toric_quotient_record,
    "cotangent-bundle": cotangent_bundle_record,
}


def catalog() -> tuple[ModelRecord, ...]:
    """Worked examples, each consistent under propagation."""
    return (
        projective_space_record(),
        cubic_conic_record(),
        toric_quotient_record(2),
        toric_quotient_record(3),
        cotangent_bundle_record(2),
    )
