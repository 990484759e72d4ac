import random

from exactstat.spectrum import from_levels


def random_spectra(count, seed=20261015, max_levels=6, max_energy=12, max_g=3, min_energy=0):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        k = rng.randint(1, max_levels)
        energies = rng.sample(range(min_energy, max_energy + 1), k)
        out.append(from_levels([(e, rng.randint(1, max_g)) for e in energies]))
    return out


# filled by test_acceptance, printed by the terminal-summary hook in conftest
ACCEPTANCE_LINES = {}
