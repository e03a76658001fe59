"""JSON Schemas (draft 2020-12) for the ``--json`` output of each subcommand.

The package itself never validates against these; they document the output
shapes and the test suite checks every golden JSON output against them.
"""

_INT = {"type": "integer"}
_INTS = {"type": "array", "items": _INT}
_STRS = {"type": "array", "items": {"type": "string"}}
_MATRIX = {"type": "array", "items": _INT, "minItems": 4, "maxItems": 4}
_CASE = {"enum": ["loop", "edge"]}
_CELL = {"type": "array", "items": {"type": "array", "items": {"type": "string"}}}


def _obj(props, required=None, extra=False):
    return {"type": "object", "properties": props,
            "required": list(props) if required is None else required,
            "additionalProperties": extra}


ERROR = _obj({"error": {"type": "string"}})

NPC = _obj({"case": _CASE, "matrix": _MATRIX, "npc": {"type": "boolean"}})

CERTIFICATE = _obj({"case": _CASE, "matrix": _MATRIX, "moves": _STRS, "words": _STRS,
                    "note": {"type": "string"}, "refused": {"type": "string"}},
                   required=["case", "matrix", "words"])

PRESENTATION = _obj({
    "case": _CASE, "genus": _INT, "genus2": {"type": ["integer", "null"]},
    "generators": _STRS,
    "relators": {"type": "array", "items": _obj({"label": {"type": "string"},
                                                 "word": {"type": "string"}})},
})

H1 = _obj({"free_rank": _INT, "torsion_divisors": _INTS, "word": {"type": "string"},
           "image": _INTS, "torsion": {"type": "boolean"}},
          required=["free_rank", "torsion_divisors"])

FORCE = _obj({"outcome": {"enum": ["ForcedVU", "Decomposable", "NotForced", "HypothesisViolated"]},
              "oracle_confirmed": {"type": "boolean"}, "targets": _STRS, "trace": _STRS})

SWEEP_LINE = _obj({"matrix": _MATRIX, "pattern": {"type": "string"},
                   "outcome": {"type": "string"}, "oracle_confirmed": {"type": "boolean"},
                   "error": {"type": "string"}},
                  required=["matrix", "pattern", "outcome", "oracle_confirmed"])

SWEEP_SUMMARY = _obj({"summary": {"const": True}, "case": _CASE, "jobs": _INT,
                      "counts": {"type": "object", "additionalProperties": _INT}})

VERIFY_REP = _obj({"pass": {"type": "boolean"},
                   "failures": {"type": "array", "items": _obj({
                       "label": {"type": "string"}, "relator": {"type": "string"},
                       "residue": {"type": "array", "items": _CELL}})}})

VU_WORD = _obj({"word": {"type": ["string", "null"]}, "char_poly": {"type": "string"},
                "norm_poly": {"type": "string"},
                "cyclotomic_multiset": {"type": ["array", "null"], "items": _INT},
                "verdict": {"type": "boolean"}, "witness_order": {"type": ["integer", "null"]}})

BY_COMMAND = {
    "npc": NPC,
    "certificate": CERTIFICATE,
    "presentation": PRESENTATION,
    "h1": H1,
    "force": FORCE,
    "verify-rep": VERIFY_REP,
    "vu-word": VU_WORD,
}
