"""ASCII art dataset synthesis, benchmarking, and LLM-as-judge evaluation."""

__version__ = "0.1.0"
