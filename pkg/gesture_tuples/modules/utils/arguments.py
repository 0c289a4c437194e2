"""gesture_tuples.utils.arguments"""

import os
import json
import copy
from typing import Any, Iterable, List


def load_dict(source: Any, flavor: str = "json") -> dict:
    """Read a run config, a report or a record into a fresh dict.

    Parameters
    ----------
    source: str or dict
        A json file path, a json string, or a dict that gets deep-copied.
    flavor: str
        Only "json" is understood.

    Returns
    -------
    config: dict
        Empty when source is empty.
    """

    assert flavor == "json", "load_dict reads json only, get " + str(flavor)
    if not source:
        return {}
    if isinstance(source, dict):
        return copy_dict(source)
    if not isinstance(source, str):
        raise TypeError("Can not load {} as a dict".format(type(source).__name__))
    if os.path.isfile(source):
        with open(source, "r", encoding="utf-8") as f:
            config = json.load(f)
    else:
        config = json.loads(source)
    if not isinstance(config, dict):
        raise TypeError("Expect a json object, get {}".format(type(config).__name__))
    return config


def _ensure_folder(path: str):
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)


def save_dict(config: Any, path: str, indent: int = 2) -> str:
    """Write a dict (or anything load_dict takes) as pretty json, folders included"""

    _ensure_folder(path)
    with open(path, "w", encoding="utf-8") as f:
        f.write(json.dumps(load_dict(config), indent=indent, ensure_ascii=False) + "\n")
    return path


def load_records(path: str) -> List[dict]:
    records = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as err:
                raise ValueError("{}:{}: {}".format(path, lineno, err)) from err
    return records


def save_records(records: Iterable[dict], path: str) -> str:
    """One json object per line, keys sorted so reruns give identical files"""

    _ensure_folder(path)
    with open(path, "w", encoding="utf-8") as f:
        for record in records:
            f.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")
    return path


def update_dict(src_dict: dict, new_dict: dict, soft_update: bool = False) -> dict:
    """Merge new_dict into src_dict, section by section.

    Parameters
    ----------
    src_dict: dict
        The base config, updated in place.
    new_dict: dict
        The overrides; falsy values such as 0 or null still override.
    soft_update: bool
        Keep the values src_dict already holds and only add missing keys.

    Returns
    -------
    src_dict: dict
        The merged config.
    """

    if not src_dict:
        return new_dict
    if not new_dict:
        return src_dict
    assert isinstance(src_dict, dict) and isinstance(
        new_dict, dict
    ), "update_dict merges dicts, get {} and {}".format(type(src_dict), type(new_dict))
    for key, value in new_dict.items():
        if key not in src_dict:
            src_dict[key] = value
        elif isinstance(value, dict) and isinstance(src_dict[key], dict):
            src_dict[key] = update_dict(src_dict[key], value, soft_update)
        elif not soft_update:
            src_dict[key] = value
    return src_dict


def dump_dict(config: dict, flavor: str = "table:2") -> str:
    """Render a dict for the console: "table:<width>" gives indented key lines, else json"""

    if not config:
        return ""
    if not flavor.startswith("table:"):
        return json.dumps(config, ensure_ascii=False)
    width = int(flavor.split(":")[1])

    def _lines(section, indent):
        pad = " " * indent
        lines = []
        for key, value in section.items():
            if value is None or (isinstance(value, (dict, list, tuple, set)) and not value):
                continue
            if isinstance(value, dict) and len(str(key) + str(value)) > width - indent - 2:
                lines.append("{}{}:".format(pad, key))
                lines.extend(_lines(value, indent + 2))
            elif isinstance(value, bool):
                lines.append("{}{}: {}".format(pad, key, str(value).lower()))
            elif isinstance(value, float):
                lines.append("{}{}: {:g}".format(pad, key, value))
            else:
                lines.append("{}{}: {}".format(pad, key, value))
        return lines

    return "\n".join(_lines(config, 0))


def copy_dict(config: dict) -> dict:
    if not config:
        return {}
    return copy.deepcopy(config)
