"""Link-level simulation of MDS-coded modulation.

The heavy lifting lives in the compiled ``_core`` module; this package
re-exports its surface and adds small conveniences.
"""

from ._core import (  # noqa: F401
    BerRecord,
    ConstellationSet,
    FecId,
    Mapping,
    MappingMode,
    ModemConfig,
    Parity,
    Pipeline,
    Scheme,
    SimConfig,
    SpcMethod,
    StopRule,
    bits_per_codeword,
    build_pam_partition,
    build_psk_partition,
    config_from_csv_header,
    conv_encode,
    decode_tuple,
    default_sets,
    detect_trellis,
    ebn0_db_from_snr_db,
    encode_tuple,
    enumerate_tuples,
    equalize,
    gray_class,
    gray_label,
    llr_index_elementwise,
    llr_optimal,
    llr_symbol_elementwise,
    modulate,
    natural_class,
    natural_label,
    noise_power_from_snr_db,
    parity_element,
    plot_ber_csv,
    run_point,
    run_sweep,
    spc_extrinsic,
    spc_update,
    spectral_efficiency,
    total_bits_per_codeword,
    transmit,
    viterbi_hard,
    viterbi_soft,
    write_csv,
)

__version__ = "0.1.0"


def bits_from_str(s):
    """'0101' -> [0, 1, 0, 1]."""
    return [int(c) for c in s]
