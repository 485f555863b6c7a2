"""LTL task planning on semantic grid maps."""

import os
from pathlib import Path

_packaged = Path(__file__).with_name("data")
if "LTLNAV_DATA_DIR" not in os.environ and (_packaged / "prompts").is_dir():
    os.environ["LTLNAV_DATA_DIR"] = str(_packaged)

from ._core import (  # noqa: E402
    Automaton,
    DslError,
    LlmUnavailable,
    LtlParseError,
    Map,
    MapFormatError,
    NoPath,
    SyntacticFailure,
    build_prompt,
    compile,
    dsl_to_formula,
    eval_finite,
    evaluate_suite,
    formula_to_dsl,
    ground_fallback,
    load_map,
    parse_formula,
    parse_map,
    plan,
    plan_instruction,
    project_voxels,
    prompt_hash,
    to_infix,
)

EXIT_SUCCESS, EXIT_FAILURE, EXIT_NO_PATH, EXIT_SYNTACTIC, EXIT_IO = range(5)
