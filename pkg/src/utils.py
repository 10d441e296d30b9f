#!/usr/bin/env python
# -*- coding: utf-8 *-*


"""
    This file contains every utility content
    used by the TrainCruise software.

     ____________________________________________________
    | REFER TO THE MAIN.PY FILE FOR THE CHANGE DOC TABLE |
     ‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾‾
"""


# =--------------= #
# Libraries import #
# =--------------= #

from typing            import Any, Dict, Union
from pathlib           import Path
import copy
import hashlib
import json

# =---------------------------------------------------------------------------= #


# =--------------------------------------------------= #
# REFER TO THE MAIN.PY FILE FOR THE AUTHORSHIP SECTION #
# =--------------------------------------------------= #


# =---------------------= #
# Output naming functions #
# =---------------------= #

def next_run_directory_available(path: Path, stem: str) -> Path:
    """
    Compute the next run directory name available (i.e.: non-existing).

    :param Path path: The directory to compute the next run directory name available in.
    :param str stem: The base name of the run directory.
    :returns: The next run directory name available.
    :rtype: Path
    """

    # Return path / stem if such a directory doesn't exist, otherwise
    # return path / stem-X, X being the first number available starting as 1.
    return (path / Path(stem)) if not (path / Path(stem)).exists() \
        else path / next(
        (Path(f"{stem}-{i}") for i in range(1, 2**16) if not (path / Path(f"{stem}-{i}")).exists())
    )

# =-----------------------------------------------------------------------------------------------------= #


# =-------------------------= #
# Dictionary utility function #
# =-------------------------= #

def json_write(dictionary: Dict[Any, Any], file: Path) -> None:
    """
    Write the dumped given dictionary to the provided file.

    :param dictionary: The dictionary to write to the provided file.
    :type dictionary: Dict[Any, Any]
    :param file: The file to be written the provided dictionary.
    :type file: pathlib.Path
    """

    # Open the provided file and write it
    # the dumped given dictionary.
    with open(file, 'w') as output:
        output.write(json_dumps(dictionary))


def _json_default(value: Any) -> Any:
    # numpy scalars and arrays.
    if hasattr(value, "tolist"):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def json_dumps(content: Any) -> str:
    """Dump content the way every TrainCruise JSON file is written."""
    return json.dumps(content, indent=4, default=_json_default)


def json_read(file: Union[str, Path]) -> Dict[Any, Any]:
    """
    Read the provided file and return its json-parsed content.
    json.JSONDecodeError is left to the caller, which knows how to report it.

    :param file: The file to read.
    :type file: str or pathlib.Path
    """

    # Open the provided file and parse it.
    with open(file, 'r', encoding="utf-8") as source:
        return json.load(source)


def update_dict(dictionary: Dict[Any, Any], *keys: str, value: Any = None) -> None:
    """
    Assign the value to the element the keys lead to within the provided dictionary.

    :param dictionary: The dictionary to edit the value.
    :type dictionary: Dict[Any, Any].
    :param keys: keys to access the desired element from the provided dictionary.
    :type keys: str
    :param value: The new value to set to such an element from the provided dictionary. By default, None.
    :type value: Any
    """

    # Retrieve such an element from the given keys within the provided dictionary,
    # creating the missing intermediate dictionaries.
    elem: Dict[str, Any] = dictionary
    for key in keys[:-1]:
        elem = elem.setdefault(key, {})

    # Assign the given value.
    elem[keys[-1]] = value


def merge_dict(base: Dict[Any, Any], overlay: Dict[Any, Any]) -> Dict[Any, Any]:
    """
    Return a deep copy of base with overlay merged into it recursively.
    Lists and scalars of overlay replace the ones of base.

    :param base: The dictionary providing the defaults.
    :type base: Dict[Any, Any]
    :param overlay: The dictionary whose values win.
    :type overlay: Dict[Any, Any]
    """

    # Start from a deep copy so neither argument gets mutated.
    out: Dict[Any, Any] = copy.deepcopy(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = merge_dict(out[key], value)
        else:
            update_dict(out, key, value=copy.deepcopy(value))
    return out


def canonical_hash(dictionary: Dict[Any, Any]) -> str:
    """
    Return the SHA-256 hex digest of the canonical json form of the dictionary.

    :param dictionary: The dictionary to hash.
    :type dictionary: Dict[Any, Any]
    """
    return hashlib.sha256(json.dumps(dictionary, sort_keys=True, separators=(',', ':')).encode()).hexdigest()

# =---------------------------------------------------------------------------------------------------= #
