"""
@brief Centralized user-facing strings and section headers.
       Contains section titles, logging templates, report phrases and error
       strings for the fair-division toolkit.
"""
HEAD_RUN     = "RULE RUN"
HEAD_CHECK   = "PROPERTY CHECK"
HEAD_SWEEP   = "PARAMETER SWEEP"
HEAD_LEMMAS  = "DEADLINE LEMMA VERIFICATION"
HEAD_GEN     = "GENERATED INSTANCE"


class LogMsg:
    """
    @brief Standardized log templates to be used across modules.
    """

    # Command lifecycle
    COMMAND_START    = "Starting command: {}"
    COMMAND_DONE     = "Command finished: {} (exit code {})"
    DATA_LOAD_START  = "Loading JSON from {}"
    DATA_LOAD_OK     = "Data successfully loaded from file: {}"
    DATA_LOAD_FAIL   = "Failed to load JSON: {} - {}"
    OUTPUT_WRITTEN   = "Output written to {}"

    # Rules
    RULE_START       = "Running rule {} on n={}, m={}, k={}"
    RULE_DONE        = "Rule {} produced bundle sizes {}"
    EDF_SCHEDULE     = "EDF schedule over {} pairs, length {}"
    MIXTURE_EXPAND   = "Expanding uniform mixture of {} over {} permutations"

    # Oracles
    MMS_SEARCH       = "MMS enumeration: agent {}, n={}, m={}"
    VERTEX_SCAN      = "Vertex scan: {} joint profiles"
    DISTORTION_DONE  = "Distortion search {} on {}: worst ratio {}"

    # Lemmas and sweeps
    LEMMA_RANGE      = "Verifying {} for n <= {}, d <= {}"
    LEMMA_COUNTER    = "Counterexample: {} at n={}, d={} (lhs={}, rhs={})"
    SHARD_START      = "Shard {} started: {} cells"
    SHARD_DONE       = "Shard {} done: {} rows"
    METRIC_DONE      = "Metric calculated: {} = {}"


class ReportMsg:
    """
    @class ReportMsg
    @brief Readable one-liners for report output.
    """

    ALLOCATION      = "Allocation ({}):"
    BUNDLE          = "  agent {}: {}"
    PROPERTY        = "  {:<22} {}"
    WELFARE         = "Social welfare: {} (~{:.6f})"
    ALPHA           = "Guaranteed MMS fraction: {}"
    LEMMA_OK        = "{}: verified for {} (n, d) cells"
    LEMMA_FAIL      = "{}: counterexample at n={}, d={}"
    SPOT_VALUE      = "  {:<40} {}"
    SWEEP_ROW       = "  {:<20} n={:<3} cells={:<4} worst={:<12} pass={:.1f}%"
    PASS            = "pass"
    FAIL            = "FAIL"
    NOT_APPLICABLE  = "n/a"


class ErrMsg:
    """
    @class ErrMsg
    @brief Standardized error messages for exceptions and validation.
    """
    DUPLICATE_GOOD       = "Agent {} ranks good {} more than once"
    RANKING_LENGTH       = "Agent {} ranks {} goods, expected {}"
    GOOD_OUT_OF_RANGE    = "Good {} (agent {}) outside 0..{}"
    DIMENSION_MISMATCH   = "Dimension mismatch: {} is {}, expected {}"
    NEGATIVE_VALUE       = "Agent {} has negative value {} for good {}"
    NOT_UNIT_SUM         = "Agent {} values sum to {}, expected 1"
    NOT_CONSISTENT       = "Valuations of agent {} are not consistent with the ranking"
    INVALID_ALLOCATION   = "Invalid allocation: {}"
    K_TOO_LARGE          = "k={} exceeds m={}"
    ZERO_N               = "Harmonic number requires n >= 1, got {}"
    CAP_EXCEEDED         = "{} = {} exceeds cap {}"
    EMPTY_MARKET         = "Operation requires at least one good"
    PICK_WITHOUT_RANKED  = "Agent {} has no ranked good left at pick {}"
    K_BELOW_THRESHOLD    = "k={} below the EF1 threshold {} for n={}, m={}"
    K_BELOW_N            = "k={} below required {} (n={})"
    K_ZERO               = "Rule {} needs k >= 1"
    M_NOT_GREATER_THAN_N = "Rule requires m > n, got n={}, m={}"
    INFEASIBLE_DEADLINES = "More than {} pairs have deadline <= {}"
    ALPHA_OUT_OF_RANGE   = "alpha={} outside [0, 1]"
    TOP_K_DISAGREE       = "Agents {} and {} rank different top-k sets"
    N_TOO_SMALL          = "Construction needs n >= {}, got {}"
    UNKNOWN_RULE         = "Unknown rule id: {}"
    PRECONDITION         = "Precondition violated: {} = {} ({})"
