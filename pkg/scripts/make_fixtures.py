"""Write the 1/2-lazy companions of the fixture chains (used by `revchain compare`)."""
from pathlib import Path

from revchain.chainspec import ChainSpec, dump_chain_spec, load_chain_spec
from revchain.kernel import lazy_mixture

CHAINS = Path(__file__).resolve().parent.parent / "data" / "chains"

for name in ("flip", "lazy2", "mh3"):
    spec = load_chain_spec(CHAINS / f"{name}.chain")
    half = lazy_mixture(spec.pair, 0.5)
    out = ChainSpec(spec.n, half.P, half.pi, spec.functions)
    (CHAINS / f"{name}_half.chain").write_text(dump_chain_spec(out))
    print("wrote", f"{name}_half.chain")
