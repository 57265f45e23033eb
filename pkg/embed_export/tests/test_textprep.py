"""Newsgroup cleanup pinned step by step on crafted messages."""

import pytest

from embed_export.textprep import (
    assemble,
    clean_body,
    split_header,
    strip_quoting,
    strip_signature,
    subject_of,
)

_MESSAGE = "\n".join([
    "From: ada@example.edu (Ada L.)",
    "Subject: Re: widget routing",
    "Organization: Example U.",
    "Lines: 12",
    "",
    "bob@example.com wrote:",
    "> the widget drops every third packet",
    "Only when the ring buffer wraps.",
    "",
    "The fix is to size the buffer to a power of two.",
    "",
    "--",
    "Ada L. | ada@example.edu",
])


def test_subject_extraction():
    assert subject_of(_MESSAGE) == "Re: widget routing"


def test_subject_header_is_case_insensitive():
    assert subject_of("subject:  spaced out \n\nbody") == "spaced out"


def test_missing_subject_is_empty():
    assert subject_of("From: x@example.com\n\nbody text") == ""


def test_split_header_at_first_blank_line():
    header, body = split_header(_MESSAGE)
    assert "Organization: Example U." in header
    assert body.startswith("bob@example.com wrote:")
    assert "Organization" not in body


def test_message_without_blank_line_is_all_header():
    header, body = split_header("From: x@example.com\nSubject: hi")
    assert body == ""
    assert subject_of("From: x@example.com\nSubject: hi") == "hi"


def test_clean_body_drops_header_quotes_and_signature():
    expected = (
        "Only when the ring buffer wraps.\n"
        "\n"
        "The fix is to size the buffer to a power of two."
    )
    assert clean_body(_MESSAGE) == expected


@pytest.mark.parametrize("line", [
    "> the widget drops every third packet",
    "| boxed quotation",
    "fred@example.com writes:",
    "In article <123@example.org> pat explains",
    "Quoted from the group FAQ:",
    "as the manual said: unplug it first",
])
def test_quote_like_lines_are_dropped(line):
    assert strip_quoting("keep me\n" + line + "\nand me") == "keep me\nand me"


@pytest.mark.parametrize("line", [
    "the > operator is overloaded here",
    "plain prose line",
    "pipe | in the middle stays",
])
def test_plain_lines_are_kept(line):
    assert strip_quoting("keep me\n" + line) == "keep me\n" + line


def test_signature_after_dashes_is_dropped():
    body = "real content\nmore content\n--\nname | email\nwitty quote"
    assert strip_signature(body) == "real content\nmore content"


def test_underscore_separator_also_ends_the_body():
    body = "real content\n____\nad for my shareware"
    assert strip_signature(body) == "real content"


def test_trailing_paragraph_counts_as_signature():
    # Deliberately the conventional, crude behavior for this corpus: with no
    # dashed separator, everything after the last blank line is treated as a
    # signature, so a multi-paragraph body loses its final paragraph.
    body = "first paragraph here.\n\nsecond paragraph here."
    assert strip_signature(body) == "first paragraph here."


def test_single_paragraph_body_is_unchanged():
    body = "one line\nanother line"
    assert strip_signature(body) == body


def test_assemble_s2s_ignores_body():
    assert assemble("the title", "the body", "s2s") == "the title"


def test_assemble_p2p_joins_with_single_newline():
    assert assemble("the title", "the body", "p2p") == "the title\nthe body"


def test_assemble_p2p_with_one_empty_half():
    assert assemble("the title", "", "p2p") == "the title"
    assert assemble("", "the body", "p2p") == "the body"
