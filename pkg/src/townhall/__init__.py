"""Meeting-feedback engine: clicker-augmented transcripts, feedback-weighted
extractive summaries, topic labeling, evaluation metrics, and a small HTTP
service for report authoring."""

__version__ = "0.1.0"
