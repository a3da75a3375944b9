"""Named fixtures shared by the test modules."""

import numpy as np

from qubitqsd import Ensemble


def _ens(priors, vectors, labels=None):
    return Ensemble.from_arrays(priors, vectors, labels=labels)


def trine():
    ang = np.arange(3) * 2 * np.pi / 3
    return _ens([1 / 3] * 3, np.c_[np.cos(ang), np.zeros(3), np.sin(ang)] / 3)


TETRAHEDRON = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]]) / np.sqrt(3)


def sic():
    return _ens([0.25] * 4, TETRAHEDRON / 4)


def bb84():
    return _ens([0.25] * 4, np.array([[0, 0, 1], [0, 0, -1], [1, 0, 0], [-1, 0, 0]]) / 4)


def acute_triangle():
    th = np.radians([90, 0, -160])
    return _ens([1 / 3] * 3, np.c_[np.cos(th), np.zeros(3), np.sin(th)] / 3)


def right_triangle():
    return _ens([1 / 3] * 3, np.array([[0, 0, 1], [1, 0, 0], [0, 0, -1]]) / 3)


def obtuse_triangle():
    return _ens([1 / 3] * 3, np.array([[0, 0, 1], [0.5, 0, 0], [0, 0, -1]]) / 3)


def dominated():
    return _ens([0.8, 0.2], [[0, 0, 0], [0, 0, 0.2]])


def helstrom():
    return _ens([0.5, 0.5], [[0, 0, 0.5], [0.5, 0, 0]])


def generic_triplet():
    return _ens([0.5, 0.3, 0.2], np.array([[0, 0, 0.25], [0.18, 0, -0.06], [-0.18, 0, -0.06]]))


NAMED = {
    "trine": trine,
    "sic": sic,
    "bb84": bb84,
    "acute_triangle": acute_triangle,
    "right_triangle": right_triangle,
    "obtuse_triangle": obtuse_triangle,
    "dominated": dominated,
    "helstrom": helstrom,
    "generic_triplet": generic_triplet,
}
