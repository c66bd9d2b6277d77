"""Finite-volume mesh of the cell stack, cooling plates and coolant
channels (one-dimensional along the flow times one-dimensional through the
stack)."""
from __future__ import annotations
import numpy as np
import scipy.sparse as sp
from dataclasses import dataclass
from typing import List, Tuple
from .config import PlantConfig
from .correlations import h_conv
from ..exceptions import ConfigError


class PlantState:
    __slots__ = ('t_cell', 't_plate', 't_coolant')

    t_cell: np.ndarray  # K, n_axial x n_layers
    t_plate: np.ndarray  # K, n_sides x n_axial
    t_coolant: np.ndarray  # K, n_sides x n_axial

    def __init__(self, t_cell: np.ndarray, t_plate: np.ndarray,
                 t_coolant: np.ndarray):
        self.t_cell = t_cell
        self.t_plate = t_plate
        self.t_coolant = t_coolant

    @classmethod
    def uniform(cls, model: PlantModel, temperature: float) -> PlantState:
        return model.unpack(np.full(model.n_nodes, float(temperature)))

    @classmethod
    def prefilled(cls, model: PlantModel, temperature: float,
                  t_in: float) -> PlantState:
        """Solid nodes at `temperature`, channels already filled with
        inlet water."""
        state = cls.uniform(model, temperature)
        state.t_coolant[...] = float(t_in)
        return state

    def is_valid(self) -> bool:
        return all(np.all(np.isfinite(a)) and np.all(a > 0.0)
                   for a in (self.t_cell, self.t_plate, self.t_coolant))

    def __repr__(self) -> str:
        return (f'cell: {self.t_cell.mean():.3f} K '
                f'plate: {self.t_plate.mean():.3f} K '
                f'coolant: {self.t_coolant.mean():.3f} K')


@dataclass(frozen=True, eq=False)
class PlantModel:
    config: PlantConfig
    capacity: np.ndarray  # J/K per node
    conductance: sp.csr_matrix  # W/K, graph Laplacian of the solid links
    advection: sp.csr_matrix  # per unit m_dot * cp_water
    inlet: np.ndarray  # per unit m_dot * cp_water
    outlet: np.ndarray  # flow fraction leaving each node
    source: np.ndarray  # m3 of heat generating volume per node
    cell_index: np.ndarray  # n_axial x n_layers
    plate_index: np.ndarray  # n_sides x n_axial
    coolant_index: np.ndarray  # n_sides x n_axial

    @property
    def n_nodes(self) -> int:
        return self.capacity.size

    @property
    def cell_volume(self) -> float:
        """Modeled cell volume (half the cell with symmetry)."""
        return float(self.source.sum())

    @property
    def flow_fraction(self) -> float:
        """Share of the total flow carried by the modeled channels."""
        return float(self.outlet.sum())

    def pack(self, state: PlantState) -> np.ndarray:
        vec = np.empty(self.n_nodes)
        vec[self.cell_index] = state.t_cell
        vec[self.plate_index] = state.t_plate
        vec[self.coolant_index] = state.t_coolant
        return vec

    def unpack(self, vec: np.ndarray) -> PlantState:
        return PlantState(vec[self.cell_index].copy(),
                          vec[self.plate_index].copy(),
                          vec[self.coolant_index].copy())

    def cell_average(self, vec: np.ndarray) -> float:
        return float(self.source @ vec / self.cell_volume)

    def cell_max(self, vec: np.ndarray) -> float:
        return float(vec[self.cell_index].max())

    def outlet_temperature(self, vec: np.ndarray) -> float:
        return float(self.outlet @ vec / self.flow_fraction)

    def internal_energy(self, vec: np.ndarray) -> float:
        """Enthalpy relative to 0 K, J."""
        return float(self.capacity @ vec)


class _Links:

    def __init__(self):
        self.rows: List[int] = []
        self.cols: List[int] = []
        self.vals: List[float] = []

    def add(self, i: int, j: int, g: float):
        if g <= 0.0:
            return
        self.rows += [i, j, i, j]
        self.cols += [i, j, j, i]
        self.vals += [g, g, -g, -g]

    def matrix(self, n: int) -> sp.csr_matrix:
        return sp.coo_matrix(
            (self.vals, (self.rows, self.cols)), shape=(n, n)).tocsr()


def _layout(config: PlantConfig) -> Tuple[int, int]:
    n_sides = 1 if config.symmetric else 2
    return n_sides, config.n_stack * n_sides


def build_plant(config: PlantConfig) -> PlantModel:
    n_ax = config.n_axial
    n_sides, n_layers = _layout(config)
    dx = config.cell_length / n_ax
    dz = 0.5 * config.cell_thickness / config.n_stack
    width = config.cell_width

    face_area = width * dx  # cell/plate/coolant contact, per axial node
    stack_area = width * dz  # cell layer cross-section along the flow
    plate_area = width * config.plate_thickness
    if min(face_area, stack_area, plate_area) <= 0.0:
        raise ConfigError('degenerate plant geometry (zero area)')

    n_cell = n_ax * n_layers
    cell_index = np.arange(n_cell).reshape(n_ax, n_layers)
    plate_index = n_cell + np.arange(n_sides * n_ax).reshape(n_sides, n_ax)
    coolant_index = n_cell + n_sides * n_ax + \
        np.arange(n_sides * n_ax).reshape(n_sides, n_ax)
    n = n_cell + 2 * n_sides * n_ax

    bat, alu, wat = config.battery, config.aluminum, config.water
    capacity = np.empty(n)
    capacity[cell_index] = bat.volumetric_heat_capacity * face_area * dz
    capacity[plate_index] = alu.volumetric_heat_capacity * face_area * \
        config.plate_thickness
    capacity[coolant_index] = wat.volumetric_heat_capacity * face_area * \
        config.channel_gap

    source = np.zeros(n)
    source[cell_index] = face_area * dz

    links = _Links()
    g_stack = bat.lam * face_area / dz
    g_cell_axial = bat.lam * stack_area / dx
    g_plate_axial = alu.lam * plate_area / dx
    g_contact = 0.0 if config.adiabatic_cell else face_area / (
        0.5 * dz / bat.lam + 0.5 * config.plate_thickness / alu.lam)
    # both channel walls belong to the plate
    g_film = h_conv(config) * 2.0 * face_area

    for j in range(n_ax):
        for k in range(n_layers - 1):
            links.add(cell_index[j, k], cell_index[j, k + 1], g_stack)
        if j + 1 < n_ax:
            for k in range(n_layers):
                links.add(cell_index[j, k], cell_index[j + 1, k],
                          g_cell_axial)
            for s in range(n_sides):
                links.add(plate_index[s, j], plate_index[s, j + 1],
                          g_plate_axial)
        # side 0 faces the last layer; side 1 (full stack) the first one
        boundary = [n_layers - 1, 0][:n_sides]
        for s, k in enumerate(boundary):
            links.add(cell_index[j, k], plate_index[s, j], g_contact)
            links.add(plate_index[s, j], coolant_index[s, j], g_film)

    # first-order upwind advection along each channel
    f = config.flow_split
    adv_rows, adv_cols, adv_vals = [], [], []
    inlet = np.zeros(n)
    outlet = np.zeros(n)
    for s in range(n_sides):
        chain = coolant_index[s]
        inlet[chain[0]] = f
        outlet[chain[-1]] = f
        for j, node in enumerate(chain):
            adv_rows.append(node)
            adv_cols.append(node)
            adv_vals.append(f)
            if j:
                adv_rows.append(node)
                adv_cols.append(chain[j - 1])
                adv_vals.append(-f)
    advection = sp.coo_matrix(
        (adv_vals, (adv_rows, adv_cols)), shape=(n, n)).tocsr()

    return PlantModel(
        config=config,
        capacity=capacity,
        conductance=links.matrix(n),
        advection=advection,
        inlet=inlet,
        outlet=outlet,
        source=source,
        cell_index=cell_index,
        plate_index=plate_index,
        coolant_index=coolant_index)
