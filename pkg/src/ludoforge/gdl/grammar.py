"""The grammar of the mini game description language.

Productions are plain data: a category maps to the head keywords allowed in
that position, and each head carries one or more argument signatures. The
same table drives validation, mutation-site categorization, and random
subtree sampling, so the language stays closed by construction.

``or`` (move choice vs. condition disjunction) and ``between``/``to``/
``from`` (clause vs. bare site reference) are context-disambiguated: a
keyword resolves to exactly one signature *within* the category expected at
its position.
"""

from __future__ import annotations

from dataclasses import dataclass, field


SELF = "@self"  # argument category equal to the category being matched

ROLE_OWNERS = ("Each", "P1", "P2")
PLAYER_REFS = ("Mover", "Next")
REGION_NAMES = ("Top", "Bottom", "Left", "Right", "Corners", "SidesNoCorners", "Board")
RELATIONS = ("Orthogonal", "Diagonal", "Adjacent")
DIRECTION_NAMES = (
    "N", "NE", "E", "SE", "S", "SW", "W", "NW",
    "Forward", "Backward", "FL", "FR", "BL", "BR",
)
RESULT_KINDS = ("Win", "Loss", "Draw")

GAME_NAME_POOL = ("GAME_NAME",)
PIECE_NAME_POOL = ("PIECE_ALPHA", "PIECE_BETA")
PLACE_REF_POOL = ("PIECE_ALPHA1", "PIECE_ALPHA2", "PIECE_BETA1", "PIECE_BETA2")


@dataclass(frozen=True)
class Arg:
    """One slot in a production signature."""

    kind: str  # 'cat' | 'enum' | 'int' | 'str' | 'key' | 'group' | 'many'
    cat: str | None = None
    enum: tuple[str, ...] = ()
    lo: int = 0
    hi: int = 0
    sample_lo: int | None = None  # narrower range used by the sampler
    sample_hi: int | None = None
    key: str | None = None
    pool: tuple[str, ...] = ()
    opt: bool = False


def C(cat: str, opt: bool = False) -> Arg:
    return Arg("cat", cat=cat, opt=opt)


def E(*names: str, opt: bool = False) -> Arg:
    return Arg("enum", enum=names, opt=opt)


def I(lo: int, hi: int, opt: bool = False, sample: tuple[int, int] | None = None) -> Arg:
    slo, shi = sample if sample else (None, None)
    return Arg("int", lo=lo, hi=hi, sample_lo=slo, sample_hi=shi, opt=opt)


def S(pool: tuple[str, ...]) -> Arg:
    return Arg("str", pool=pool)


def K(name: str, cat: str, opt: bool = False) -> Arg:
    return Arg("key", key=name, cat=cat, opt=opt)


def G(cat: str | None = None, enum: tuple[str, ...] = ()) -> Arg:
    """A brace group whose items all match one category or enum."""
    return Arg("group", cat=cat, enum=enum)


def V(cat: str) -> Arg:
    """One-or-more positional arguments of a category (variadic tail)."""
    return Arg("many", cat=cat)


Signature = tuple[Arg, ...]

# category -> head -> list of alternative signatures
_PRODUCTIONS: dict[str, dict[str, list[Signature]]] = {
    "game": {
        "game": [(S(GAME_NAME_POOL), C("players"), C("equipment"), C("rules"))],
    },
    "players": {
        "players": [(I(1, 8, sample=(2, 2)),)],
    },
    "equipment": {
        "equipment": [(G("equip_item"),)],
    },
    "equip_item": {
        "board": [(C("shape"),)],
        "piece": [(S(PIECE_NAME_POOL), E(*ROLE_OWNERS), C("moverule", opt=True))],
        "regions": [
            (E("P1", "P2"), C("sites")),
            (E("P1", "P2"), G("sites")),
        ],
    },
    "shape": {
        "square": [(I(2, 19, sample=(3, 9)),)],
        "hex": [(I(2, 9, sample=(2, 5)),)],
        "rotate": [(I(0, 359, sample=(30, 90)), C("shape"))],
    },
    "rules": {
        "rules": [(C("meta", opt=True), C("start", opt=True), C("play"), C("end", opt=True))],
    },
    "meta": {
        "meta": [(C("metaflag"),)],
    },
    "metaflag": {
        "no": [(E("Repeat"),)],
    },
    "start": {
        "start": [(C("place"),), (G("place"),)],
    },
    "place": {
        "place": [(S(PLACE_REF_POOL), C("sites"))],
    },
    "play": {
        "play": [(C("moverule"),)],
    },
    "moverule": {
        "move": [
            (E("Add"), C("to_clause"), C("then", opt=True)),
            (E("Step"), C("directions", opt=True), C("to_clause"), C("then", opt=True)),
            (E("Slide"), C("directions", opt=True), C("to_clause", opt=True), C("then", opt=True)),
            (E("Hop"), C("directions", opt=True), C("between_clause", opt=True), C("to_clause"), C("then", opt=True)),
        ],
        "or": [
            (C(SELF), V(SELF)),
            (G(SELF),),
        ],
        "forEach": [(E("Piece"),)],
    },
    "to_clause": {
        "to": [(C("sites", opt=True), K("if", "cond", opt=True), C("apply", opt=True))],
    },
    "between_clause": {
        "between": [(K("if", "cond"), C("apply", opt=True))],
    },
    "apply": {
        "apply": [(C("effect"),)],
    },
    "then": {
        "then": [(C("effect"),)],
    },
    "effect": {
        "remove": [(C("siteref"),)],
        "enclose": [(C("from_clause"), E(*RELATIONS), C("between_clause"))],
    },
    "from_clause": {
        "from": [(C("siteref"),)],
    },
    "directions": {
        "directions": [
            (E(*DIRECTION_NAMES),),
            (G(None, DIRECTION_NAMES),),
        ],
    },
    # site conditions: evaluable per candidate site inside a move clause
    "cond": {
        "is": [
            (E("Empty"), C("siteref")),
            (E("Occupied"), C("siteref")),
            (E("Enemy"), C("playerexpr")),
            (E("Friend"), C("playerexpr")),
            (E("In"), C("siteref"), C("sites")),
        ],
        "not": [(C(SELF),)],
        "and": [(C(SELF), V(SELF)), (G(SELF),)],
        "or": [(C(SELF), V(SELF)), (G(SELF),)],
    },
    # end conditions: everything above plus whole-position tests
    "endcond": {
        "is": [
            (E("Empty"), C("siteref")),
            (E("Occupied"), C("siteref")),
            (E("Enemy"), C("playerexpr")),
            (E("Friend"), C("playerexpr")),
            (E("In"), C("siteref"), C("sites")),
            (E("Line"), I(1, 9, sample=(2, 5)), E("Orthogonal", opt=True)),
            (E("Connected"), I(2, 6, sample=(2, 3)), E("SidesNoCorners", "Corners")),
            (E("Connected"), E(*RELATIONS, opt=True), E("Mover")),
        ],
        "not": [(C(SELF),)],
        "and": [(C(SELF), V(SELF)), (G(SELF),)],
        "or": [(C(SELF), V(SELF)), (G(SELF),)],
        "no": [(E("Moves"), E(*PLAYER_REFS))],
    },
    "playerexpr": {
        "who": [(K("at", "siteref"),)],
    },
    "siteref": {
        "to": [()],
        "from": [()],
        "between": [()],
        "last": [(E("To", "From"),)],
    },
    "sites": {
        "sites": [
            (E("Empty", *REGION_NAMES, *PLAYER_REFS, "P1", "P2"),),
            (E("Around"), C("siteref")),
        ],
        "expand": [(C("sites"),)],
    },
    "end": {
        "end": [(C("endrule"),), (G("endrule"),)],
    },
    "endrule": {
        "if": [(C("endcond"), C("result"))],
    },
    "result": {
        "result": [(E(*PLAYER_REFS), E(*RESULT_KINDS))],
    },
}


@dataclass
class Grammar:
    productions: dict[str, dict[str, list[Signature]]] = field(
        default_factory=lambda: _PRODUCTIONS
    )
    root_category: str = "game"

    def __post_init__(self) -> None:
        for cat, heads in self.productions.items():
            for head, alts in heads.items():
                for sig in alts:
                    for arg in sig:
                        ref = arg.cat
                        if ref and ref != SELF and ref not in self.productions:
                            raise ValueError(
                                f"grammar not closed: {cat}/{head} references {ref}"
                            )

    def heads_of(self, category: str) -> dict[str, list[Signature]]:
        return self.productions.get(category, {})

    def categories(self) -> list[str]:
        return list(self.productions)


DEFAULT_GRAMMAR = Grammar()
