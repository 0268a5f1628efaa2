#pragma once

#include "relkit/closability.hpp"
#include "relkit/decompose.hpp"
#include "relkit/document.hpp"
#include "relkit/dominate.hpp"
#include "relkit/errors.hpp"
#include "relkit/generate.hpp"
#include "relkit/numeric.hpp"
#include "relkit/pairs.hpp"
#include "relkit/pointeval.hpp"
#include "relkit/relation.hpp"
#include "relkit/report.hpp"
#include "relkit/subspace.hpp"
#include "relkit/tolerance.hpp"
#include "relkit/verify.hpp"
