#pragma once

#include "proxcalc/catalog.hpp"
#include "proxcalc/conjugation.hpp"
#include "proxcalc/determination.hpp"
#include "proxcalc/errors.hpp"
#include "proxcalc/ext_real.hpp"
#include "proxcalc/function.hpp"
#include "proxcalc/prox.hpp"
#include "proxcalc/random.hpp"
#include "proxcalc/report.hpp"
#include "proxcalc/spec_io.hpp"
#include "proxcalc/subdiff.hpp"
#include "proxcalc/vector.hpp"
#include "proxcalc/verify.hpp"
