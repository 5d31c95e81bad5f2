#pragma once

// Umbrella header for the library (everything except the CLI layer).

#include "ckf/error.hpp"
#include "ckf/intmat.hpp"
#include "ckf/abelian.hpp"
#include "ckf/ck.hpp"
#include "ckf/sft.hpp"
#include "ckf/bundle.hpp"
