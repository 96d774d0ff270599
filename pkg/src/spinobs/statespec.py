"""Text and JSON forms for naming states on the command line.

Token form, terms separated by ';' and given equal weight unless a fifth
token supplies a real coefficient:

    "1 0 0 up"                  one hydrogenic ket |n l m, spin>
    "2 1 1 up; 2 1 -1 up"       superposition, normalized
    "2 1 0.5 0.5"               coupled eigenstate |n l j m_j>

JSON form:

    {"Z": 1.0, "terms": [{"n": 1, "l": 0, "m": 0, "spin": "up", "re": 1.0, "im": 0.0}]}
    {"Z": 1.0, "coupled": {"n": 2, "l": 1, "j": 0.5, "mj": 0.5}}
    {"gaussian": {"sigma": 1.0, "center": [0, 0, 0], "momentum": [0, 0, 0], "spinor": [[1, 0], [0, 0]]}}
"""

import json

from spinobs.special import DomainError
from spinobs.states import SPINS, gaussian_state, hydrogenic_state, make_coupled_state


class SpecError(ValueError):
    """Malformed state specification; the message names the offending token."""


def _int_token(tok, what):
    try:
        return int(tok)
    except ValueError:
        raise SpecError(f"bad {what} token {tok!r}: expected an integer") from None


def _float_token(tok, what):
    try:
        return float(tok)
    except ValueError:
        raise SpecError(f"bad {what} token {tok!r}: expected a number") from None


def _is_number(tok):
    try:
        float(tok)
    except ValueError:
        return False
    return True


def parse_tokens(text, Z=1.0):
    parts = [p.strip() for p in text.split(";")]
    if not any(parts):
        raise SpecError("empty state specification")
    terms = []
    coupled = None
    for part in parts:
        toks = part.split()
        if not toks:
            raise SpecError(f"empty term in {text!r}")
        if len(toks) == 4 and toks[3].lower() not in SPINS and _is_number(toks[3]):
            if len(parts) > 1:
                raise SpecError(f"coupled form {part!r} cannot be combined with other terms")
            n = _int_token(toks[0], "n")
            l = _int_token(toks[1], "l")
            coupled = (n, l, _float_token(toks[2], "j"), _float_token(toks[3], "m_j"))
            continue
        if len(toks) not in (4, 5):
            raise SpecError(f"term {part!r} needs 'n l m spin [coeff]' or 'n l j mj'")
        spin = toks[3].lower()
        if spin not in SPINS:
            raise SpecError(f"bad spin token {toks[3]!r}: expected 'up' or 'down'")
        coeff = _float_token(toks[4], "coefficient") if len(toks) == 5 else 1.0
        terms.append((_int_token(toks[0], "n"), _int_token(toks[1], "l"), _int_token(toks[2], "m"), spin, coeff))
    try:
        if coupled is not None:
            return make_coupled_state(*coupled, Z=Z)
        return hydrogenic_state(terms, Z)
    except DomainError as exc:
        raise SpecError(f"{exc} in {text!r}") from None


def _check_keys(obj, allowed, where):
    if not isinstance(obj, dict):
        raise SpecError(f"{where} must be a JSON object")
    extra = set(obj) - set(allowed)
    if extra:
        raise SpecError(f"unknown key {sorted(extra)[0]!r} in {where}")


def parse_json(obj, Z=None):
    _check_keys(obj, {"Z", "terms", "coupled", "gaussian"}, "state")
    kinds = [k for k in ("terms", "coupled", "gaussian") if k in obj]
    if len(kinds) != 1:
        raise SpecError("state needs exactly one of 'terms', 'coupled', 'gaussian'")
    z = float(obj.get("Z", Z if Z is not None else 1.0))
    try:
        if "terms" in obj:
            terms = []
            for i, t in enumerate(obj["terms"]):
                _check_keys(t, {"n", "l", "m", "spin", "re", "im"}, f"terms[{i}]")
                missing = {"n", "l", "m", "spin"} - set(t)
                if missing:
                    raise SpecError(f"terms[{i}] is missing {sorted(missing)[0]!r}")
                coeff = complex(float(t.get("re", 1.0)), float(t.get("im", 0.0)))
                terms.append((int(t["n"]), int(t["l"]), int(t["m"]), str(t["spin"]), coeff))
            return hydrogenic_state(terms, z)
        if "coupled" in obj:
            c = obj["coupled"]
            _check_keys(c, {"n", "l", "j", "mj"}, "coupled")
            return make_coupled_state(int(c["n"]), int(c["l"]), float(c["j"]), float(c["mj"]), z)
        g = obj["gaussian"]
        _check_keys(g, {"sigma", "center", "momentum", "spinor"}, "gaussian")
        spinor = g.get("spinor", [[1, 0], [0, 0]])
        chi = [complex(float(a), float(b)) for a, b in spinor]
        return gaussian_state(
            float(g.get("sigma", 1.0)),
            g.get("center", [0, 0, 0]),
            g.get("momentum", [0, 0, 0]),
            chi,
        )
    except SpecError:
        raise
    except (DomainError, KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"invalid state JSON: {exc}") from None


def parse_state(text, Z=1.0):
    """Parse either form; text beginning with '{' is read as JSON."""
    stripped = text.strip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise SpecError(f"invalid JSON state: {exc}") from None
        return parse_json(obj, Z)
    return parse_tokens(stripped, Z)
