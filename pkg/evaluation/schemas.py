# evaluation/schemas.py
# JSON Schema for experiment recipe files

METHOD_SCHEMA = {
    "type": "object",
    "properties": {
        "label": {"type": "string", "pattern": "^(MA|MVM|MVP)[0-9]+$|^(EVM|EVP|GL)$"},
        "gammas": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "minItems": 1,
        },
        "ordering": {"enum": ["community_size", "random", "natural"]},
    },
    "required": ["label"],
    "additionalProperties": False,
}

SBM_GENERATOR_SCHEMA = {
    "type": "object",
    "properties": {
        "sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "p_in": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
        "informative_layers": {"type": "integer", "minimum": 0},
        "noisy_layers": {"type": "integer", "minimum": 0},
        "p_noise": {"type": "number", "minimum": 0, "maximum": 1},
    },
    "additionalProperties": False,
}

LFR_GENERATOR_SCHEMA = {
    "type": "object",
    "properties": {
        "n": {"type": "integer", "minimum": 2},
        "community_sizes": {"type": "array", "items": {"type": "integer", "minimum": 1}},
        "avg_degree": {"type": "number", "exclusiveMinimum": 0},
        "max_degree": {"type": "integer", "minimum": 1},
        "degree_exponent": {"type": "number", "exclusiveMinimum": 1},
        "informative_layers": {"type": "integer", "minimum": 0},
        "noisy_layers": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

REAL_GENERATOR_SCHEMA = {
    "type": "object",
    "properties": {
        "datasets": {"type": "array", "items": {"type": "string"}, "minItems": 1},
        "setting": {"enum": ["informative", "plus-noise", "flatten-plus-noise"]},
        "knn": {"type": "integer", "minimum": 1},
    },
    "required": ["datasets"],
    "additionalProperties": False,
}

EXPERIMENT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Multiplex Louvain experiment",
    "type": "object",
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "kind": {"enum": ["sbm", "lfr", "real"]},
        "generator": {"type": "object"},
        "grid": {"type": "array", "items": {"type": "number"}},
        "methods": {"type": "array", "items": METHOD_SCHEMA, "minItems": 1},
        "gammas": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
            "minItems": 1,
        },
        "samples": {"type": "integer", "minimum": 1},
        "runs": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "workers": {"type": "integer", "minimum": 1},
        "output": {"type": "string"},
        "nmi_average": {"enum": ["geometric", "arithmetic"]},
        "record_timings": {"type": "boolean"},
        "best_gamma": {"type": "boolean"},
    },
    "required": ["name", "kind", "methods"],
    "additionalProperties": False,
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "sbm"}}},
            "then": {"properties": {"generator": SBM_GENERATOR_SCHEMA}},
        },
        {
            "if": {"properties": {"kind": {"const": "lfr"}}},
            "then": {"properties": {"generator": LFR_GENERATOR_SCHEMA}},
        },
        {
            "if": {"properties": {"kind": {"const": "real"}}},
            "then": {
                "properties": {"generator": REAL_GENERATOR_SCHEMA},
                "required": ["generator"],
            },
        },
    ],
}
