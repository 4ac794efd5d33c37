import logging

from qwalk.log import QwalkFormatter, log_list, to_ascii


def test_to_ascii():
    assert to_ascii("℘′(ω₂) ≤ ∞") == "wp'(w2) <= inf"
    assert to_ascii("  ├── ζ₁₀") == "  - zeta10"


def test_log_list(caplog):
    with caplog.at_level(logging.INFO, logger="qwalk"):
        log_list(["a", "b", "c"])
    assert [r.getMessage() for r in caplog.records] == [
        "  ├── a",
        "  ├── b",
        "  └── c",
    ]


def test_formatter():
    record = logging.LogRecord("qwalk", logging.INFO, "", 0, "ratio ω₃/ω₂", None, None)
    assert QwalkFormatter().format(record) == "\n  ratio ω₃/ω₂"
    assert QwalkFormatter(ascii_only=True).format(record) == "\n  ratio w3/w2"

    item = logging.LogRecord("qwalk", logging.INFO, "", 0, "  └── π", None, None)
    assert QwalkFormatter(ascii_only=True).format(item) == "    - pi"
