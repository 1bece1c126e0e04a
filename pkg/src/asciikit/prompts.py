"""Prompt templates for synthesis, benchmarking, and judging.

Art always travels between ``<art>`` tags so outputs stay parseable.
Rule-extraction, classification, and judge prompts demand JSON replies.
"""

GENERATION_SYSTEM = (
    "You are an ASCII art generation expert.\n"
    "Your goal is to create precise and structurally correct ASCII art based on user requests.\n"
    "Output format:\n"
    "<art>\n"
    "[Final ASCII Art]\n"
    "</art>"
)

GENERATION_USER = "{instruction}"

UNDERSTANDING_SYSTEM = (
    "You are an expert in interpreting ASCII art. "
    "Describe the content of the following ASCII illustration precisely."
)

UNDERSTANDING_DIRECT_USER = (
    "What is depicted in the following ASCII art?\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>"
)

UNDERSTANDING_SELECT_USER = (
    "What is depicted in the following ASCII art?\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>\n"
    "Please select the correct category from the options below.\n"
    "Options:\n"
    "{options_list}\n"
    'Please respond with only the category name (e.g., "Cat", "Wolf").'
)

GENERATION_JUDGE_SYSTEM = (
    "You are a strict expert ASCII Art Critic. Your job is to verify if the "
    'generated art MATCHES the user\'s request: "{instruction}".\n'
    "\n"
    "Inputs Provided:\n"
    "1. The rendered IMAGE (Visual check).\n"
    "2. The raw TEXT characters (Structure check).\n"
    "\n"
    "Evaluate on these 5 dimensions (Score 0.0 to 1.0):\n"
    "- SA (Semantic Alignment): Visually looks like the main object requested?\n"
    '- IF (Instruction Faithfulness): Follows constraints (e.g., "facing left")?\n'
    "- SC (Structural Coherence): Lines connected? Shape closed and logical?\n"
    "- SL (Spatial Logic): Parts (head, legs) in correct relative positions?\n"
    "- CE (Character Efficiency): Clean? Penalize spamming/grid-filling.\n"
    "\n"
    "CRITICAL INSTRUCTIONS:\n"
    '1. TRANSCRIPTION FIRST: MUST "read" the art from the image first.\n'
    "   - If text: type exact letters; If object: describe orientation objectively.\n"
    '2. COMPARE: Transcription vs. Request (e.g., User "left" vs. You see "right" -> low IF).\n'
    "\n"
    "Output JSON format ONLY:\n"
    "{{\n"
    '  "SA": <float>, "IF": <float>, "SC": <float>,\n'
    '  "SL": <float>, "CE": <float>,\n'
    '  "reasoning": "<short explanation>"\n'
    "}}"
)

UNDERSTANDING_JUDGE_SYSTEM = "You are an intelligent evaluator."

UNDERSTANDING_JUDGE_USER = (
    "Task: Determine if the Model's Output conveys the same meaning as the Ground Truth.\n"
    "\n"
    "Inputs:\n"
    "- Ground Truth: {ground_truth}\n"
    "- Model's Output: {model_output}\n"
    "\n"
    "Evaluation Criteria:\n"
    "1. Semantic Equivalence: Focus on meaning/intent, not exact wording.\n"
    '2. Allow Synonyms: Be flexible with paraphrasing (e.g., "taxi" matches "cab").\n'
    "3. Ignore Noise: Disregard punctuation, casing, typos, or polite fillers.\n"
    "\n"
    "Output JSON format ONLY:\n"
    '{{ "is_correct": <bool>, "confidence": <float>,\n'
    '  "reasoning": "<Very brief explanation>" }}'
)

STYLE_EXTRACTION_SYSTEM = (
    "You are an expert ASCII art style analyst.\n"
    "You are given one ASCII artwork twice: as a rendered image and as raw text.\n"
    "Extract the style rules that define it:\n"
    "1. The character palette: the exact set of non-space characters used for "
    "boundaries and textures.\n"
    "2. The structural logic: a short description of the geometric topology "
    "(e.g. sparse angular line-art, dense block shading).\n"
    "\n"
    "Output JSON format ONLY:\n"
    "{\n"
    '  "palette": ["<char>", ...],\n'
    '  "structural_logic": "<short description>"\n'
    "}"
)

STYLE_EXTRACTION_USER = (
    "Category: {category}\n"
    "Description: {description}\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>"
)

SENSITIVITY_SYSTEM = (
    "You classify subjects of ASCII artworks by how tightly their visual "
    "style is bound to their anatomy.\n"
    "- sensitive: organic, morphology-bound subjects (animals, faces, plants); "
    "reshaping them breaks the art.\n"
    "- insensitive: rigid, geometry-decoupled subjects (vehicles, tools, "
    "buildings); the style survives reshaping.\n"
    "\n"
    "Output JSON format ONLY:\n"
    '{ "sensitivity": "sensitive" | "insensitive", "rationale": "<short reason>" }'
)

SENSITIVITY_USER = "Category: {category}\nDescription: {description}"

VARIANT_SYSTEM = (
    "You are an ASCII art generation expert specialized in stylistic imitation.\n"
    "You must produce a NEW artwork that keeps the exact style of the "
    "reference while applying the requested change.\n"
    "\n"
    "Style rules (hard constraints):\n"
    "- Character palette: use only these characters plus spaces: {palette}\n"
    "- Structural logic: {structural_logic}\n"
    "\n"
    "Requested change: {directive}\n"
    "\n"
    "Output format:\n"
    "<art>\n"
    "[Final ASCII Art]\n"
    "</art>\n"
    "Optionally, after the closing tag, add two lines:\n"
    "Category: <new category label>\n"
    "Description: <one-sentence description of the new artwork>"
)

VARIANT_USER = (
    "Reference artwork (category: {category}; description: {description}):\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>\n"
    "{fewshot_block}"
    "Produce the new artwork now."
)

FEWSHOT_EXEMPLAR = (
    "Example of the target style (category: {category}):\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>\n"
)

REVIEW_SYSTEM = (
    "You are an ASCII art reviewer. You receive two rendered images: the "
    "reference artwork and a draft derived from it, plus the draft's raw text.\n"
    "Locate visual discrepancies in the draft (misalignment, broken contours, "
    "stray characters) and correct them.\n"
    "\n"
    "Hard constraints:\n"
    "- Use only these characters plus spaces: {palette}\n"
    "- Preserve the structural logic: {structural_logic}\n"
    "- Keep the intended change: {directive}\n"
    "\n"
    "If the draft is already correct, return it unchanged.\n"
    "Output format:\n"
    "<art>\n"
    "[Corrected ASCII Art]\n"
    "</art>"
)

REVIEW_USER = (
    "Draft text:\n"
    "<art>\n"
    "{ascii_art}\n"
    "</art>\n"
    "The first attached image is the reference render; the second is the "
    "draft render. Return the corrected draft."
)


def options_block(options: list[str]) -> str:
    """Render a candidate label list one option per line."""
    return "\n".join(options)
