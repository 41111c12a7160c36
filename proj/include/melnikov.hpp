#pragma once

// Everything: exact algebra, A3 reduction, the D4 chain, numerics and monodromy.
#include "melnikov/json_io.hpp"
#include "melnikov/numerics/asymptotics.hpp"
#include "melnikov/numerics/phi.hpp"
#include "melnikov/numerics/shooting.hpp"
#include "melnikov/numerics/zeros.hpp"
