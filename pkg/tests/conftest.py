import os

import pytest

from threadlint.classmodel import ThreadSafeTypeAllowlist, build_class_model
from threadlint.frontend import SourceFile, parse_compilation_unit

CORPUS_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "corpus")


def corpus_path(name: str) -> str:
    return os.path.join(CORPUS_DIR, name)


def corpus_source(name: str) -> SourceFile:
    path = corpus_path(name)
    with open(path, "r", encoding="utf-8") as fh:
        return SourceFile(path, fh.read())


def parse_corpus(name: str):
    return parse_compilation_unit(corpus_source(name))


def model_for(name: str, class_index: int = 0, allowlist: ThreadSafeTypeAllowlist = None, **kw):
    ast = parse_corpus(name)
    decl = ast.classes[class_index]
    if allowlist is None:
        allowlist = ThreadSafeTypeAllowlist()
    return build_class_model(decl, allowlist=allowlist, **kw)


def model_from_source(src: str, path: str = "<test>.java", class_index: int = 0, **kw):
    ast = parse_compilation_unit(SourceFile(path, src))
    return build_class_model(ast.classes[class_index], **kw)


def line_of(text: str, needle: str) -> int:
    """1-based line number of the first line containing ``needle``."""
    for i, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return i
    raise AssertionError(f"{needle!r} not found")


@pytest.fixture
def corpus_names():
    return sorted(n for n in os.listdir(CORPUS_DIR) if n.endswith(".java"))
