"""Cleanup of raw newsgroup messages.

These mirror the long-standing conventions for preparing 20 Newsgroups
text: drop the RFC-822 header block, drop quoted material from earlier
posts, and drop the trailing signature block.  Each step is a separate
function so tests can pin the behavior down individually.
"""

from __future__ import annotations

import re

# Lines that introduce or carry quoted text from an earlier post.
_QUOTE_RE = re.compile(
    r"(writes in|writes:|wrote:|says:|said:|^In article|^Quoted from|^\||^>)"
)


def split_header(message: str) -> tuple[str, str]:
    """Split at the first blank line into (header block, body).

    A message without a blank line is all header and has an empty body.
    Folded (continuation) header lines are not unfolded; the corpus rarely
    folds Subject and the cost of being wrong is a truncated title.
    """
    header, _, body = message.partition("\n\n")
    return header, body


def subject_of(message: str) -> str:
    """The Subject: header value, or '' when the message has none."""
    header, _ = split_header(message)
    for line in header.split("\n"):
        if line.lower().startswith("subject:"):
            return line[len("subject:"):].strip()
    return ""


def strip_quoting(body: str) -> str:
    """Drop every line that looks like quoted material or its attribution."""
    kept = [line for line in body.split("\n") if not _QUOTE_RE.search(line)]
    return "\n".join(kept)


def strip_signature(body: str) -> str:
    """Drop the signature block, if any.

    The signature is taken to be everything after the last separator line —
    a line that is blank or made of dashes or underscores.  When no such
    line exists (or it is the first line) the body is returned unchanged.
    """
    lines = body.strip().split("\n")
    line_num = 0
    for line_num in range(len(lines) - 1, -1, -1):
        stripped = lines[line_num].strip()
        if stripped.strip("-") == "" or stripped.strip("_") == "":
            break
    if line_num > 0:
        return "\n".join(lines[:line_num])
    return body


def clean_body(message: str, quotes: bool = True, signature: bool = True) -> str:
    """Body of ``message`` with the header and the selected noise removed."""
    _, body = split_header(message)
    if signature:
        body = strip_signature(body)
    if quotes:
        body = strip_quoting(body)
    return body.strip()


def assemble(title: str, body: str, variant: str) -> str:
    """Compose the document text for a variant.

    ``s2s`` uses the title alone; ``p2p`` joins title and body with a single
    newline.  An empty half is dropped rather than leaving a dangling
    separator.
    """
    if variant == "s2s":
        return title
    if title and body:
        return title + "\n" + body
    return title or body
