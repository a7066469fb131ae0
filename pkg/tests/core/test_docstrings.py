import importlib
import inspect
import pkgutil
from types import ModuleType

import pytest

import arbor.core.model
import arbor.core.reductions


def _modules(package: ModuleType) -> list[str]:
    return sorted(info.name for info in pkgutil.iter_modules(package.__path__, f"{package.__name__}."))


MODULES = [*_modules(arbor.core.model), *_modules(arbor.core.reductions)]


@pytest.mark.parametrize("module_name", MODULES)
def test_documented_helpers_list_their_arguments(module_name: str) -> None:
    """
    Test that every documented public function of the model and reduction modules has an Args section.

    Args:
        module_name: The dotted module name.
    """
    module = importlib.import_module(module_name)
    missing = []
    for name, function in inspect.getmembers(module, inspect.isfunction):
        if name.startswith("_") or function.__module__ != module_name:
            continue
        doc = inspect.getdoc(function)
        if doc and inspect.signature(function).parameters and "Args:" not in doc:
            missing.append(name)
    assert missing == []


def test_flip_last_documents_its_error() -> None:
    """
    Test that the sibling helper names its error in its docstring.
    """
    from arbor.core.model.strings import flip_last

    doc = inspect.getdoc(flip_last)
    assert doc is not None
    assert "Raises:" in doc
    assert "DOMAIN_MISMATCH" in doc
