class AcceptanceError(Exception):
    '''
    Two independent computations of the same quantity disagree, or an
    acceptance assertion of an experiment failed
    '''
    pass

class ArrayError(Exception):
    '''
    Expecting an array
    '''
    pass

class ConfigurationError(Exception):
    '''
    The Lie configuration or the experiment configuration is not valid.
    The message names the offending field
    '''
    pass

class DensityError(Exception):
    '''
    A local density did not stabilise within the allowed levels or the
    residue enumeration exceeded its cap
    '''
    pass

class InputError(Exception):
    '''
    As the name suggest... the type of input to the function or
    method is not of the expected types
    '''
    pass

class LatticeError(Exception):
    '''
    Ill-formed lattice data, or a definite lattice was required
    '''
    pass

class OutputError(Exception):
    '''
    As the name suggest... there are problems with output,
    usually the output directory
    '''
    pass

class QuadratureError(Exception):
    '''
    The fibre K/L cannot be integrated with the available rules
    '''
    pass
