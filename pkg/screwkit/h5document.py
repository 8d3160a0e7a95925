"""Storing screwkit documents (nested dicts and lists) in h5 format"""

__copyright__ = "Copyright (C) 2026 screwkit developers"
__status__    = "testing"
__author__    = "screwkit developers"

import os

import h5py
import numpy as np

NONE_STR = "NONE_TYPE"
RESERVED_VALUE_STRINGS = [NONE_STR]

DICT_PREFIX = "DICT_"
LIST_PREFIX = "LIST_"
ARRAY_PREFIX = "ARRAY_"
RESERVED_KEY_STRINGS = [DICT_PREFIX, LIST_PREFIX, ARRAY_PREFIX]

H5_EXTENSIONS = ('.h5', '.hdf5')


def is_h5_path(filename):
    return os.path.splitext(filename)[1].lower() in H5_EXTENSIONS


def _ensure_not_reserved(k, v):
    if type(v) == str and v in RESERVED_VALUE_STRINGS:
        raise ValueError("The string %s is reserved"%(v))
    if type(k) == str:
        for rk in RESERVED_KEY_STRINGS:
            if k[:len(rk)] == rk:
                raise ValueError("Keys may not begin with %s, got %s"%(rk, k))


def _list_item_string(i):
    return 'ITEM_' + str(i)


def _numeric_list(v):
    """ True for a non-empty flat list of only floats or only ints """
    if len(v) == 0:
        return False
    kinds = set(type(x) for x in v)
    return kinds == {float} or kinds == {int}


def _write_attr(f, k, v):
    """
    Writes a single document entry to h5 format.
    Arguments:
        f: An h5py file or group to which this entry will be written.
           Dictionaries and lists are written as groups, flat numeric
           lists as one array dataset, everything else as a scalar dataset.
        k: The entry name (a string)
        v: None, a bool, int, float, string, list or dict. Nested elements
           must also be of one of these types.
    """
    _ensure_not_reserved(k, v)
    if v is None:
        f.create_dataset(k, data=NONE_STR)
    elif type(v) == dict:
        g = f.create_group(DICT_PREFIX + k, track_order=True)
        for kk, vv in v.items():
            _write_attr(g, kk, vv)
    elif type(v) == list and _numeric_list(v):
        f.create_dataset(ARRAY_PREFIX + k, data=np.array(v))
    elif type(v) in (list, tuple):
        g = f.create_group(LIST_PREFIX + k, track_order=True)
        for i in range(len(v)):
            _write_attr(g, _list_item_string(i), v[i])
    elif type(v) in (bool, int, float, str):
        f.create_dataset(k, data=v)
    else:
        raise TypeError("Cannot store %s of type %s" % (k, type(v)))


def _read_attrs(f):
    """
    Reads all entries which were written using _write_attr.
    Arguments:
        f: An h5py file or group
    """
    d = {}
    for k, item in f.items():
        if k[:len(DICT_PREFIX)] == DICT_PREFIX:
            d[k[len(DICT_PREFIX):]] = _read_attrs(item)
        elif k[:len(LIST_PREFIX)] == LIST_PREFIX:
            tmp_d = _read_attrs(item)
            v = [tmp_d[_list_item_string(i)] for i in range(len(tmp_d))]
            d[k[len(LIST_PREFIX):]] = v
        elif k[:len(ARRAY_PREFIX)] == ARRAY_PREFIX:
            d[k[len(ARRAY_PREFIX):]] = item[()].tolist()
        else:
            v = item[()]
            if isinstance(v, bytes): # strings are stored as bytes objects
                v = v.decode("utf-8")
            elif isinstance(v, np.generic):
                v = v.item()
            if type(v) == str and v == NONE_STR:
                d[k] = None
            else:
                d[k] = v
    return d


def save_h5(doc, filename, overwrite=False):
    """Save a document (a dict) to an h5 file"""
    if os.path.exists(filename) and not overwrite:
        raise IOError("Will not overwrite %s"%(filename))
    with h5py.File(filename, 'w', track_order=True) as f:
        for k, v in doc.items():
            _write_attr(f, k, v)


def load_h5(filename):
    """Load a document written by save_h5"""
    with h5py.File(filename, 'r') as f:
        return _read_attrs(f)
