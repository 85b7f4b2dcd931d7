"""Write the model specs as JSON for the command line tool.

    python3 demos/05_spec_files.py
    cylindex verify --input demos/specs/calibration.json
    cylindex check --input demos/specs/tau_multiplier.json --format json
"""

from pathlib import Path

from cylindex import models, spec_io
from cylindex.symbol_core import Base

out = Path(__file__).parent / "specs"
out.mkdir(exist_ok=True)

specs = {
    "calibration": models.calibration_spec(),
    "degree_one": models.degree_one_symbol_spec("plus"),
    "twisted_dirac": models.twisted_dirac_spec(1.0),
    "tau_multiplier": models.dt_lambda(Base.POINT),
    "tau_multiplier_circle": models.dt_lambda(Base.CIRCLE),
    "shifted_dbar": models.dbar_spec(0.5),
}
for name, spec in specs.items():
    spec_io.dump(spec, out / f"{name}.json")
    print(f"{name:24s} {spec_io.spec_hash(spec)[:16]}")

# round trip
back = spec_io.load(out / "calibration.json")
print("hash stable:", spec_io.spec_hash(back) == spec_io.spec_hash(specs["calibration"]))
