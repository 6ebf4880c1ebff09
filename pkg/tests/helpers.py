from svie.randomness import FineNoise, GridSpec, generate_fine_noise


def make_noise(seed, coarse_n, refine_factor, path_index=0, horizon=1.0):
    grid = GridSpec(horizon, coarse_n, refine_factor)
    return grid, generate_fine_noise(seed, path_index, grid, [coarse_n])


def fixed_noise(increments, fine_step, taus_by_level=None):
    return FineNoise(increments, fine_step, taus_by_level or {})
