import json
import sys
from pathlib import Path

if sys.version_info < (3, 9):

    def files(package_name: str):
        assert package_name == "sslocus.core"
        return Path(__file__).parent.parent

else:
    from importlib.resources import files as files


with files("sslocus.core").joinpath("VERSION").open("r", encoding="utf-8") as f:
    VERSION = json.load(f)["version"]
    assert isinstance(VERSION, str)


def p_adic_valuation(n: int, p: int, cap: int) -> int:
    """valuation of `n` at `p`, capped at `cap` (the value for n == 0)"""
    if n == 0:
        return cap

    v = 0
    while n % p == 0 and v < cap:
        n //= p
        v += 1

    return v
