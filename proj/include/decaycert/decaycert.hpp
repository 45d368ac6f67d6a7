#pragma once

#include "decaycert/certificate.hpp"
#include "decaycert/constants.hpp"
#include "decaycert/decomposition.hpp"
#include "decaycert/expm.hpp"
#include "decaycert/generators.hpp"
#include "decaycert/linalg.hpp"
#include "decaycert/matrix_market.hpp"
#include "decaycert/optimize.hpp"
#include "decaycert/pencil.hpp"
#include "decaycert/report.hpp"
#include "decaycert/simulate.hpp"
