#pragma once

#include "entrobound/asymptotics.hpp"
#include "entrobound/discrete_qm.hpp"
#include "entrobound/errors.hpp"
#include "entrobound/gibbs.hpp"
#include "entrobound/io.hpp"
#include "entrobound/matfun.hpp"
#include "entrobound/max_entropy_oracle.hpp"
#include "entrobound/oscillator.hpp"
#include "entrobound/plot.hpp"
#include "entrobound/random.hpp"
#include "entrobound/scan.hpp"
#include "entrobound/verify.hpp"
