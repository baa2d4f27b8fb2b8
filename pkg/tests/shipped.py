"""Every model the package ships, keyed by a stable name."""

from asymcoh.abelian import ExEPreset, exe_product_model
from asymcoh.documents import load_preset
from asymcoh.flag import FlagModel, build_root_system


def shipped_models():
    models = {f"flag-{t}": FlagModel(build_root_system(t)) for t in ("A1", "A2", "B2", "G2")}
    for name in ("bl1p2", "bl2p2", "exe", "elliptic"):
        models[name] = load_preset(name)
    models["exe-closed-form"] = ExEPreset()
    models["exe-product"] = exe_product_model()
    return models
