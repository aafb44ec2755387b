# Copyright 2026 The Panolift Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""360 degree panorama geometry toolkit.

Images are float32 numpy arrays of shape (H, W, C) with values in [0, 1];
(H, W) arrays are accepted as single-channel input.
"""

from ._core import (
    CameraParams,
    EmptyMaskError,
    FormatError,
    InvalidArgument,
    average_gravity,
    calibrate,
    circular_decode,
    circular_encode,
    crop_video,
    cubemap_to_erp,
    decode,
    dir_to_erp,
    discontinuity_score,
    encode,
    erp_dir,
    erp_to_cubemap,
    flow_interpolate,
    frustum_mask,
    gravity_align,
    latent_equivariance_error,
    masked_psnr,
    minimal_rotation_between,
    pano2pers,
    pers2pano,
    read_image,
    rotate_erp,
    rotation_from_ypr,
    simulate_trajectory,
    sphere_coverage,
    stabilize,
    velocity_target,
    weight_hash,
    write_image,
    yaw_shift_augment,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
