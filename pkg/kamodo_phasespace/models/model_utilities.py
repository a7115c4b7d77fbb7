# -*- coding: utf-8 -*-
"""
Kamodo functionalization helpers shared by the model modules: tabulated
phase-space fields and series become interpolating Kamodo functions with
units, and analytic model functions are registered with kamodofy.
"""
from numpy import nan, array, meshgrid, ravel, asarray
from scipy.interpolate import RegularGridInterpolator as rgiND
from scipy.interpolate import interp1d as rgi1D


def create_interp(coord_data, data):
    '''Create an interpolator depending on the dimensions of the input.
    Inputs:
        coord_data: {'name_of_coord1': coord1_data, ...}, 1D arrays.
        data: array of shape (c1, c2, ..., cN).
    Output: an interpolator returning NaN outside the grid.
    '''
    coord_list = [value for key, value in coord_data.items()]
    if len(coord_list) == 1:
        rgi = rgi1D(*coord_list, data, bounds_error=False, fill_value=nan)
    else:
        rgi = rgiND(coord_list, data, bounds_error=False, fill_value=nan)

    def interp(xvec):
        return rgi(xvec)
    return interp


def create_funcsig(coord_data, coord_str, bounds):
    '''Forge parameter for the interpolator signature, e.g. "x_energy" for
    1D data or "xvec_phase2D" for fields on the (q, p) plane.'''
    import forge

    n_coords = len(coord_data.keys())
    if n_coords == 1:
        coord_name = list(coord_data.keys())[0]
        if coord_str != '':
            coord_name += '_' + coord_str
    else:
        coord_name = 'xvec_' + coord_str + str(n_coords) + 'D'
    return forge.FParameter(
        name=coord_name, interface_name='xvec',
        kind=forge.FParameter.POSITIONAL_OR_KEYWORD, default=bounds)


def Functionalize_Dataset(kamodo_object, coord_dict, variable_name,
                          data_dict, gridded_int, coord_str):
    '''Register tabulated data as a Kamodo function.
    Inputs:
        kamodo_object: the Kamodo object to add the function to.
        coord_dict: {'name': {'units': 'coord_units', 'data': 1D array}}
        variable_name: name of the new Kamodo function.
        data_dict: {'units': 'data_units', 'data': array} with the data
            depending on ALL coordinates given.
        gridded_int: True to also register the gridded version
            (variable_name + '_ijk') used for plotting and slicing.
        coord_str: coordinate label (e.g. 'phase' or 'energy').
    Output: the Kamodo object with the function added.
    '''
    import forge
    from kamodo import kamodofy, gridify

    coord_data = {key: asarray(value['data']) for key, value in
                  coord_dict.items()}
    coord_units = {key: value['units'] for key, value in coord_dict.items()}

    # corners of the coordinate box
    data_list = [array([value.min(), value.max()]) for value in
                 coord_data.values()]
    bounds = array([ravel(item) for item in meshgrid(*data_list)],
                   dtype=float).T

    param_xvec = create_funcsig(coord_data, coord_str, bounds)
    interp = create_interp(coord_data, data_dict['data'])
    new_interp = forge.replace('xvec', param_xvec)(interp)
    interp = kamodofy(units=data_dict['units'], data=data_dict['data'],
                      arg_units=coord_units)(new_interp)
    kamodo_object[variable_name] = interp
    if gridded_int:
        interp_grid = kamodofy(gridify(interp, **coord_data),
                               units=data_dict['units'],
                               data=data_dict['data'], arg_units=coord_units)
        kamodo_object[variable_name + '_ijk'] = interp_grid
    return kamodo_object


def register_function(kamodo_object, variable_name, func, units, arg_units,
                      citation=None):
    '''Register an analytic (vectorized) model function with units.'''
    from kamodo import kamodofy

    kamodo_object[variable_name] = kamodofy(units=units, arg_units=arg_units,
                                            citation=citation)(func)
    return kamodo_object


def check_requested(variables_requested, model_varnames):
    '''Known kamodo names from a requested variable list; unknown names are
    printed and dropped. An empty request means all.'''
    known = [value[0] for value in model_varnames.values()]
    if not variables_requested:
        return known
    err_list = [item for item in variables_requested if item not in known]
    if len(err_list) > 0:
        print('Variable name(s) not recognized:', err_list)
    return [item for item in variables_requested if item in known]
