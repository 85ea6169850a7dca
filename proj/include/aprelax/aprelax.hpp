#pragma once

#include "aprelax/checks.hpp"
#include "aprelax/config.hpp"
#include "aprelax/constitutive_law.hpp"
#include "aprelax/entropy.hpp"
#include "aprelax/grid.hpp"
#include "aprelax/initial_data.hpp"
#include "aprelax/models.hpp"
#include "aprelax/norms.hpp"
#include "aprelax/report.hpp"
#include "aprelax/scheme.hpp"
#include "aprelax/study.hpp"
