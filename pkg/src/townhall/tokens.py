"""Tokenization and the bundled stopword list.

Two token views are used downstream: the full token stream (metrics, topic
positions) and the content-token stream with stopwords removed (similarity,
candidate phrases). Both are produced by the same splitter: lowercase, then
split on runs of non-alphanumeric characters. No stemming anywhere.
"""

import re

# Bump when the list changes; the value is echoed into fixture metadata so
# goldens can detect a silent list change.
STOPWORDS_VERSION = "en-1"

# Classic English stopword list. Apostrophized forms are omitted because the
# splitter never produces them ("don't" -> "don", "t"); their fragments stay.
STOPWORDS = frozenset("""
i me my myself we our ours ourselves you your yours yourself yourselves
he him his himself she her hers herself it its itself they them their theirs
themselves what which who whom this that these those am is are was were be
been being have has had having do does did doing a an the and but if or
because as until while of at by for with about against between into through
during before after above below to from up down in out on off over under
again further then once here there when where why how all any both each few
more most other some such no nor not only own same so than too very s t can
will just don should now d ll m o re ve y ain aren couldn didn doesn hadn
hasn haven isn ma mightn mustn needn shan shouldn wasn weren won wouldn
""".split())

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def split_tokens(text: str) -> list[str]:
    """All lowercase tokens, split on non-alphanumeric runs."""
    return _TOKEN_RE.findall(text.lower())


def content_tokens(text: str) -> list[str]:
    """Tokens with stopwords removed; may be empty for stopword-only text."""
    return [t for t in split_tokens(text) if t not in STOPWORDS]


def word_count(text: str) -> int:
    """Raw whitespace token count (summary budgets are measured in these)."""
    return len(text.split())
