import os

import numpy as np
import pandas as pd
from tqdm import tqdm

from src.hardy.closed_forms import q_closed_form, q_overlap_form
from src.optimizer.angles import q_at, q_surface, theta_grid
from src.spin.algebra import SpinJ
from src.utils.io import write_csv

SPINS = ['1/2', '1', '3/2', '2']
GRID_N = 64
DIAGONAL_N = 721
OUT_DIR = 'data/surfaces'


def generate_surface_data(grid_n: int = GRID_N, diagonal_n: int = DIAGONAL_N, out_dir: str = OUT_DIR):
    """Write the q surfaces and their theta1 = theta2 slices for j = 1/2 ... 2"""
    os.makedirs(out_dir, exist_ok=True)
    summary = []

    for j in tqdm(SPINS, desc="Generating q surfaces"):
        spin = SpinJ.parse(j)
        tag = spin.label.replace('/', '_')

        surface = q_surface(spin, grid_n)
        t1, t2 = np.meshgrid(surface.thetas, surface.thetas, indexing='ij')
        write_csv(pd.DataFrame({'theta1': t1.ravel(), 'theta2': t2.ravel(), 'q': surface.q.ravel()}),
                  f'{out_dir}/q_surface_j{tag}.csv')

        thetas = theta_grid(diagonal_n)
        diagonal = pd.DataFrame({
            'theta': thetas,
            'theta_degrees': np.degrees(thetas),
            'q': [q_at(spin, t, t) for t in thetas],
            'q_closed_form': [q_closed_form(spin, t, t) for t in thetas],
            'q_overlap_form': [q_overlap_form(spin, t, t) for t in thetas],
        })
        write_csv(diagonal, f'{out_dir}/q_diagonal_j{tag}.csv')

        best = diagonal.loc[diagonal['q'].idxmax()]
        summary.append({'j': spin.label, 'theta_degrees': best['theta_degrees'], 'q_max': best['q'],
                        'surface_q_max': float(surface.q.max())})

    df = pd.DataFrame(summary)
    write_csv(df, f'{out_dir}/summary.csv')
    print(f"Generated surfaces and diagonal slices for {len(SPINS)} spins in {out_dir}")
    return df


if __name__ == "__main__":
    df = generate_surface_data()
    print(df.to_string(index=False))
