"""Record tables: loading, normalization, filtering, synthetic generation.

Values are stored as plain strings; a missing value is simply absent from
the record's value map. All normalization is lossy-but-total: composites
that cannot be parsed yield missing subfields rather than errors.
"""

import csv
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

ROLES = (
    "first_name",
    "middle_name",
    "surname",
    "female",
    "occupation",
    "street_number",
    "street_name",
    "street_type",
    "party",
    "other",
)

#: Canonical street types (12 entries) and the abbreviations folded into them.
STREET_TYPES = (
    "avenue", "boulevard", "circle", "court", "drive", "highway",
    "lane", "place", "road", "street", "terrace", "way",
)
STREET_TYPE_MAP = {t: t for t in STREET_TYPES}
STREET_TYPE_MAP.update({
    "ave": "avenue", "av": "avenue", "ave.": "avenue",
    "blvd": "boulevard", "boul": "boulevard",
    "cir": "circle",
    "ct": "court",
    "dr": "drive",
    "hwy": "highway",
    "ln": "lane",
    "pl": "place",
    "rd": "road",
    "st": "street", "str": "street",
    "ter": "terrace", "terr": "terrace",
    "wy": "way",
})

DEFAULT_FEMALE_PREFIXES = frozenset({"mrs", "ms", "miss"})
DEFAULT_HOUSEWIFE_TOKENS = frozenset({
    "housewife", "house wife", "housewf", "hsewife", "hswf", "homemaker",
})

#: Fields a record may be missing at most one of to survive filtering.
CORE_FIELDS = ("first_name", "surname", "occupation", "street_name")


class LoadError(Exception):
    """Raised when an input file violates the loading contract."""


@dataclass(frozen=True)
class FieldSpec:
    name: str
    role: str = "other"

    def __post_init__(self):
        if self.role not in ROLES:
            raise ValueError(f"unknown field role {self.role!r}")


@dataclass(frozen=True)
class FieldSchema:
    id_field: str
    fields: tuple
    missing_token: str = ""

    def __post_init__(self):
        names = [f.name for f in self.fields]
        if len(set(names)) != len(names):
            raise ValueError("field names must be unique within a schema")
        roles = [f.role for f in self.fields if f.role != "other"]
        if len(set(roles)) != len(roles):
            raise ValueError("at most one field per role")

    def field_names(self):
        return tuple(f.name for f in self.fields)

    def by_role(self, role: str) -> Optional[str]:
        for f in self.fields:
            if f.role == role:
                return f.name
        return None


@dataclass(frozen=True)
class Record:
    id: str
    values: dict

    def get(self, name: str) -> Optional[str]:
        return self.values.get(name)


@dataclass
class RecordTable:
    file_label: str
    schema: FieldSchema
    records: list

    def __post_init__(self):
        seen = {}
        for i, rec in enumerate(self.records):
            if rec.id in seen:
                raise LoadError(
                    f"duplicate id {rec.id!r} at rows {seen[rec.id]} and {i}"
                )
            seen[rec.id] = i

    def __len__(self):
        return len(self.records)

    def ids(self):
        return [r.id for r in self.records]

    def column(self, name: str):
        """Field values in row order, None where missing."""
        return [r.get(name) for r in self.records]


def _collapse(s: str) -> str:
    return " ".join(s.split()).lower()


def load_records(path, schema: FieldSchema, file_label: str = "A") -> RecordTable:
    """Load a CSV file into a RecordTable, mapping missing tokens to absent.

    The header must contain the id column and every schema field; row order
    is preserved. Errors carry 1-based row numbers (header = row 1).
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise LoadError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if schema.id_field not in header:
            raise LoadError(
                f"{path} row 1: missing id column {schema.id_field!r}"
            )
        missing_cols = [n for n in schema.field_names() if n not in header]
        if missing_cols:
            raise LoadError(
                f"{path} row 1: header lacks schema fields {missing_cols}"
            )
        idx = {name: header.index(name) for name in schema.field_names()}
        id_idx = header.index(schema.id_field)
        records = []
        seen = {}
        for rownum, row in enumerate(reader, start=2):
            if len(row) != len(header):
                raise LoadError(
                    f"{path} row {rownum}: expected {len(header)} columns,"
                    f" found {len(row)}"
                )
            rid = row[id_idx].strip()
            if not rid:
                raise LoadError(f"{path} row {rownum}: empty id")
            if rid in seen:
                raise LoadError(
                    f"{path}: id {rid!r} repeated on rows {seen[rid]} and {rownum}"
                )
            seen[rid] = rownum
            values = {}
            for name, col in idx.items():
                raw = row[col]
                if raw != schema.missing_token and raw.strip() != "":
                    values[name] = raw
            records.append(Record(id=rid, values=values))
    return RecordTable(file_label=file_label, schema=schema, records=records)


@dataclass(frozen=True)
class NormalizationRules:
    """Names of raw composite columns and the vocabulary lists.

    Any raw-column name set to None disables that step, so pre-split
    inputs can reuse the same path (case folding still applies).
    """

    given_name_field: Optional[str] = "given_name"
    prefix_field: Optional[str] = "prefix"
    address_field: Optional[str] = "address"
    surname_field: str = "surname"
    occupation_field: str = "occupation"
    passthrough: tuple = ("party",)
    female_prefixes: frozenset = DEFAULT_FEMALE_PREFIXES
    housewife_tokens: frozenset = DEFAULT_HOUSEWIFE_TOKENS
    street_type_map: dict = field(default_factory=lambda: STREET_TYPE_MAP)


NORMALIZED_FIELDS = (
    FieldSpec("first_name", "first_name"),
    FieldSpec("middle_name", "middle_name"),
    FieldSpec("surname", "surname"),
    FieldSpec("female", "female"),
    FieldSpec("occupation", "occupation"),
    FieldSpec("street_number", "street_number"),
    FieldSpec("street_name", "street_name"),
    FieldSpec("street_type", "street_type"),
)


def normalized_schema(id_field: str = "rec_id", passthrough=("party",),
                      missing_token: str = "") -> FieldSchema:
    extra = tuple(FieldSpec(p, "party" if p == "party" else "other")
                  for p in passthrough)
    return FieldSchema(id_field=id_field, fields=NORMALIZED_FIELDS + extra,
                       missing_token=missing_token)


def _split_address(address: str, type_map: dict):
    """leading digit run -> number, trailing known token -> type, rest -> name."""
    tokens = address.split()
    number = None
    if tokens and tokens[0].isdigit():
        number = tokens[0]
        tokens = tokens[1:]
    elif tokens:
        m = re.match(r"^(\d+)(.*)$", tokens[0])
        if m:
            number = m.group(1)
            rest = m.group(2).strip()
            tokens = ([rest] if rest else []) + tokens[1:]
    stype = None
    if tokens and tokens[-1] in type_map:
        stype = type_map[tokens[-1]]
        tokens = tokens[:-1]
    name = " ".join(tokens) if tokens else None
    return number, name, stype


def normalize_record(raw: Record, rules: NormalizationRules = NormalizationRules()) -> Record:
    """Map a raw record onto the normalized linkage fields.

    Lower-cases and collapses whitespace everywhere, splits the given name
    into first/middle, splits the address into number/name/type with
    street-type canonicalization, and derives the female indicator from
    the prefix or a housewife occupation (clearing occupation for
    housewives). Total: unparseable composites yield missing subfields.
    """
    get = lambda f: raw.get(f) if f else None
    values = {}

    given = get(rules.given_name_field)
    if given is not None:
        parts = _collapse(given).split(" ")
        if parts and parts[0]:
            values["first_name"] = parts[0]
        middle = " ".join(parts[1:])
        if middle:
            values["middle_name"] = middle
    for name in ("first_name", "middle_name"):
        if rules.given_name_field is None and raw.get(name) is not None:
            values[name] = _collapse(raw.get(name))

    surname = get(rules.surname_field)
    if surname is not None:
        values["surname"] = _collapse(surname)

    occupation = get(rules.occupation_field)
    occupation = _collapse(occupation) if occupation is not None else None

    prefix = get(rules.prefix_field)
    prefix = _collapse(prefix) if prefix is not None else None
    is_housewife = occupation in rules.housewife_tokens if occupation else False
    female = (prefix in rules.female_prefixes) or is_housewife
    if rules.prefix_field is None and raw.get("female") is not None:
        values["female"] = _collapse(raw.get("female"))
    else:
        values["female"] = "1" if female else "0"
    if occupation and not is_housewife:
        values["occupation"] = occupation

    address = get(rules.address_field)
    if address is not None:
        number, sname, stype = _split_address(_collapse(address),
                                              rules.street_type_map)
        if number:
            values["street_number"] = number
        if sname:
            values["street_name"] = sname
        if stype:
            values["street_type"] = stype
    elif rules.address_field is None:
        for name in ("street_number", "street_name", "street_type"):
            if raw.get(name) is not None:
                values[name] = _collapse(raw.get(name))
        stype = values.get("street_type")
        if stype is not None:
            values["street_type"] = rules.street_type_map.get(stype, stype)

    for name in rules.passthrough:
        if raw.get(name) is not None:
            values[name] = _collapse(raw.get(name))

    values = {k: v for k, v in values.items() if v}
    return Record(id=raw.id, values=values)


def normalize_table(table: RecordTable,
                    rules: NormalizationRules = NormalizationRules()) -> RecordTable:
    schema = normalized_schema(id_field=table.schema.id_field,
                               passthrough=rules.passthrough,
                               missing_token=table.schema.missing_token)
    records = [normalize_record(r, rules) for r in table.records]
    return RecordTable(file_label=table.file_label, schema=schema,
                       records=records)


def filter_records(table: RecordTable) -> RecordTable:
    """Drop records missing two or more of the core linkage fields."""
    kept = [
        r for r in table.records
        if sum(r.get(f) is None for f in CORE_FIELDS) <= 1
    ]
    return RecordTable(file_label=table.file_label, schema=table.schema,
                       records=kept)


# ---------------------------------------------------------------------------
# Synthetic data

FIRST_NAMES_F = (
    "mary", "margaret", "martha", "marion", "helen", "dorothy", "ruth",
    "anna", "elizabeth", "alice", "gussie", "hazel", "edna", "florence",
    "ethel", "grace", "clara", "bessie", "gladys", "lucille", "pearl",
    "myrtle", "agnes", "viola", "stella", "vera", "edith", "irene",
)
FIRST_NAMES_M = (
    "john", "william", "james", "george", "charles", "robert", "joseph",
    "frank", "edward", "henry", "thomas", "walter", "harold", "herbert",
    "arthur", "albert", "fred", "harry", "raymond", "louis", "carl",
    "ernest", "clarence", "paul", "ralph", "howard", "earl", "theodore",
)
MIDDLE_NAMES = (
    "allen", "bruce", "clay", "dean", "earl", "floyd", "glen", "hugh",
    "irving", "james", "keith", "lee", "miles", "neal", "owen", "perry",
    "quincy", "ross", "scott", "troy", "vance", "wade",
)
SURNAMES = (
    "smith", "johnson", "brown", "williams", "jones", "miller", "davis",
    "wilson", "anderson", "taylor", "thomas", "moore", "martin", "white",
    "adams", "dams", "albitz", "clark", "lewis", "walker", "hall", "young",
    "allen", "king", "wright", "hill", "scott", "green", "baker", "nelson",
    "carter", "mitchell", "roberts", "turner", "phillips", "campbell",
    "parker", "evans", "edwards", "collins", "stewart", "morris", "murphy",
    "cook", "rogers", "morgan", "peterson", "cooper", "reed", "bailey",
)
OCCUPATIONS = (
    "clerk", "merchant", "carpenter", "laborer", "salesman", "teacher",
    "machinist", "painter", "plumber", "engineer", "mechanic", "foreman",
    "printer", "tailor", "baker", "barber", "butcher", "driver", "nurse",
    "stenographer", "bookkeeper", "electrician", "welder", "janitor",
)
STREET_NAMES = (
    "oak", "elm", "maple", "pine", "cedar", "walnut", "chestnut", "high",
    "main", "park", "lake", "hill", "grove", "outlook", "shattuck",
    "telegraph", "broadway", "grand", "webster", "harrison", "franklin",
    "jackson", "linda", "woolsey", "alcatraz", "ashby", "bancroft",
    "college", "durant", "fruitvale",
)


@dataclass(frozen=True)
class SyntheticConfig:
    n_a: int
    n_b: int
    overlap: int
    typo_rate: float = 0.02
    missing_rate: float = 0.02
    replace_rate: float = 0.01
    initial_rate: float = 0.5
    party_switch_rate: float = 0.2
    party_split: float = 0.4


_CORRUPTIBLE = ("first_name", "middle_name", "surname", "occupation",
                "street_number", "street_name", "street_type")


def _typo(value: str, rng, alphabet: str) -> str:
    ops = ["sub", "ins", "del", "swap"] if len(value) > 1 else ["sub", "ins"]
    op = ops[rng.integers(len(ops))]
    i = int(rng.integers(len(value)))
    c = alphabet[rng.integers(len(alphabet))]
    if op == "sub":
        return value[:i] + c + value[i + 1:]
    if op == "ins":
        return value[:i] + c + value[i:]
    if op == "del":
        return value[:i] + value[i + 1:]
    j = min(i + 1, len(value) - 1)
    return value[:i] + value[j] + value[i] + value[j + 1:]


def _corrupt_field(name: str, value: str, rng, cfg: SyntheticConfig, pools):
    r = rng.random()
    if r < cfg.missing_rate:
        return None
    if r < cfg.missing_rate + cfg.typo_rate:
        alphabet = "0123456789" if name == "street_number" else "abcdefghijklmnopqrstuvwxyz"
        out = _typo(value, rng, alphabet)
        return out if out else None
    if r < cfg.missing_rate + cfg.typo_rate + cfg.replace_rate:
        pool = pools[name]
        return pool[rng.integers(len(pool))]
    return value


def generate_synthetic_files(cfg: SyntheticConfig, seed: int):
    """Two duplicate-free files plus the true matching (list of id pairs).

    Overlapping entities appear in both files; corruption is applied
    independently per field and per file. With all rates zero, true pairs
    agree exactly on every field. Deterministic given the seed.
    """
    if cfg.overlap > min(cfg.n_a, cfg.n_b):
        raise ValueError(
            f"overlap {cfg.overlap} exceeds a file size ({cfg.n_a}, {cfg.n_b})"
        )
    rng = np.random.default_rng(seed)
    n_entities = cfg.n_a + cfg.n_b - cfg.overlap
    pools = {
        "first_name": FIRST_NAMES_F + FIRST_NAMES_M,
        "middle_name": MIDDLE_NAMES,
        "surname": SURNAMES,
        "occupation": OCCUPATIONS,
        "street_name": STREET_NAMES,
        "street_type": STREET_TYPES,
        "street_number": tuple(str(n) for n in range(1, 10000, 7)),
    }

    entities = []
    for _ in range(n_entities):
        female = bool(rng.random() < 0.5)
        first_pool = FIRST_NAMES_F if female else FIRST_NAMES_M
        entities.append({
            "first_name": first_pool[rng.integers(len(first_pool))],
            "middle_name": MIDDLE_NAMES[rng.integers(len(MIDDLE_NAMES))],
            "surname": SURNAMES[rng.integers(len(SURNAMES))],
            "female": "1" if female else "0",
            "occupation": OCCUPATIONS[rng.integers(len(OCCUPATIONS))],
            "street_number": str(int(rng.integers(1, 9999))),
            "street_name": STREET_NAMES[rng.integers(len(STREET_NAMES))],
            "street_type": STREET_TYPES[rng.integers(len(STREET_TYPES))],
            "party": "d" if rng.random() < cfg.party_split else "r",
        })

    def render(entity, rid, rng, switch_party: bool):
        values = {}
        for name in _CORRUPTIBLE:
            v = _corrupt_field(name, entity[name], rng, cfg, pools)
            if v is not None:
                values[name] = v
        mid = values.get("middle_name")
        if mid and rng.random() < cfg.initial_rate:
            values["middle_name"] = mid[0]
        values["female"] = entity["female"]
        party = entity["party"]
        if switch_party:
            party = "d" if party == "r" else "r"
        values["party"] = party
        return Record(id=rid, values=values)

    schema = normalized_schema()
    a_records, b_records, truth = [], [], []
    for i in range(cfg.n_a):
        a_records.append(render(entities[i], f"A{i:06d}", rng, False))
    b_start = cfg.n_a - cfg.overlap
    for j in range(cfg.n_b):
        ent = entities[b_start + j]
        switch = False
        if j < cfg.overlap:
            switch = bool(rng.random() < cfg.party_switch_rate)
            truth.append((f"A{b_start + j:06d}", f"B{j:06d}"))
        b_records.append(render(ent, f"B{j:06d}", rng, switch))

    table_a = RecordTable("A", schema, a_records)
    table_b = RecordTable("B", schema, b_records)
    return table_a, table_b, truth


def write_csv(table: RecordTable, path) -> None:
    names = table.schema.field_names()
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow((table.schema.id_field,) + names)
        for rec in table.records:
            writer.writerow([rec.id] + [
                rec.get(n) if rec.get(n) is not None else table.schema.missing_token
                for n in names
            ])
