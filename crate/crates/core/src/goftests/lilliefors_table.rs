// Generated by examples/lilliefors_table.rs (100000 replicates per size). Do not edit.
pub(super) const SIZES: &[usize] = &[4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20, 22, 25, 30, 35, 40, 45, 50, 60, 70, 80, 90, 100, 120, 150, 200, 250, 300, 400, 500, 700, 1000, 1500, 2000, 3000, 5000];
pub(super) const ALPHAS: &[f64] = &[0.5, 0.4, 0.3, 0.25, 0.2, 0.15, 0.1, 0.075, 0.05, 0.04, 0.03, 0.025, 0.02, 0.01, 0.005, 0.0025, 0.001];
pub(super) const SCALED_QUANTILES: &[[f64; 17]] = &[
    [0.51690, 0.54244, 0.57092, 0.58709, 0.60629, 0.64327, 0.69020, 0.71815, 0.75075, 0.76638, 0.78264, 0.79191, 0.80205, 0.82743, 0.84305, 0.85528, 0.86566], // n = 4
    [0.52267, 0.55465, 0.59724, 0.62134, 0.64740, 0.67678, 0.71262, 0.73528, 0.76521, 0.78165, 0.80331, 0.81863, 0.83717, 0.88394, 0.92349, 0.95221, 0.97847], // n = 5
    [0.53553, 0.57197, 0.61108, 0.63318, 0.65816, 0.68825, 0.72789, 0.75460, 0.79111, 0.80866, 0.83095, 0.84413, 0.85997, 0.90755, 0.95144, 0.99412, 1.03917], // n = 6
    [0.54516, 0.57973, 0.61881, 0.64146, 0.66751, 0.69941, 0.74073, 0.76789, 0.80397, 0.82119, 0.84351, 0.85827, 0.87705, 0.92766, 0.97195, 1.01142, 1.06117], // n = 7
    [0.55134, 0.58576, 0.62538, 0.64878, 0.67537, 0.70837, 0.75020, 0.77838, 0.81567, 0.83618, 0.86040, 0.87393, 0.88968, 0.94169, 0.98827, 1.03062, 1.08395], // n = 8
    [0.55562, 0.59059, 0.63110, 0.65476, 0.68247, 0.71384, 0.75527, 0.78355, 0.82207, 0.84120, 0.86610, 0.88204, 0.90029, 0.95315, 1.00226, 1.04546, 1.10373], // n = 9
    [0.55798, 0.59331, 0.63473, 0.65874, 0.68594, 0.71800, 0.76181, 0.79041, 0.82783, 0.84800, 0.87172, 0.88722, 0.90458, 0.95939, 1.00560, 1.05236, 1.11172], // n = 10
    [0.56241, 0.59825, 0.63894, 0.66222, 0.68997, 0.72307, 0.76628, 0.79562, 0.83349, 0.85414, 0.87916, 0.89404, 0.91292, 0.96584, 1.01174, 1.05967, 1.11447], // n = 11
    [0.56521, 0.60129, 0.64248, 0.66628, 0.69378, 0.72691, 0.76964, 0.79894, 0.83723, 0.85709, 0.88275, 0.89752, 0.91572, 0.97127, 1.02219, 1.07061, 1.13243], // n = 12
    [0.56708, 0.60313, 0.64427, 0.66843, 0.69655, 0.72986, 0.77381, 0.80212, 0.83987, 0.86136, 0.88594, 0.90132, 0.91999, 0.97890, 1.02635, 1.07492, 1.13274], // n = 13
    [0.56904, 0.60513, 0.64658, 0.67053, 0.69852, 0.73225, 0.77763, 0.80615, 0.84376, 0.86463, 0.88981, 0.90604, 0.92536, 0.98342, 1.03610, 1.08788, 1.14414], // n = 14
    [0.57290, 0.60898, 0.64964, 0.67371, 0.70113, 0.73465, 0.77864, 0.80786, 0.84678, 0.86756, 0.89418, 0.90849, 0.92726, 0.98364, 1.03484, 1.08610, 1.13833], // n = 15
    [0.57310, 0.60927, 0.65117, 0.67471, 0.70288, 0.73622, 0.78070, 0.81102, 0.84907, 0.86948, 0.89371, 0.91019, 0.92859, 0.98382, 1.03284, 1.07568, 1.14028], // n = 16
    [0.57525, 0.61123, 0.65317, 0.67722, 0.70534, 0.73913, 0.78335, 0.81339, 0.85339, 0.87487, 0.90157, 0.91616, 0.93453, 0.99002, 1.03982, 1.09067, 1.14617], // n = 17
    [0.57701, 0.61265, 0.65403, 0.67885, 0.70611, 0.74012, 0.78500, 0.81525, 0.85599, 0.87687, 0.90217, 0.91885, 0.93691, 0.99152, 1.04493, 1.09533, 1.15918], // n = 18
    [0.57737, 0.61413, 0.65578, 0.68007, 0.70833, 0.74221, 0.78787, 0.81857, 0.85913, 0.88064, 0.90607, 0.92070, 0.94051, 0.99860, 1.05108, 1.10039, 1.16099], // n = 19
    [0.57872, 0.61515, 0.65730, 0.68120, 0.70992, 0.74460, 0.78978, 0.81915, 0.85887, 0.87894, 0.90412, 0.91962, 0.93967, 0.99832, 1.05347, 1.10817, 1.16368], // n = 20
    [0.58053, 0.61698, 0.65897, 0.68349, 0.71142, 0.74557, 0.79047, 0.82026, 0.85988, 0.88174, 0.90803, 0.92430, 0.94350, 1.00125, 1.05523, 1.11135, 1.17122], // n = 22
    [0.58237, 0.61926, 0.66183, 0.68642, 0.71517, 0.75001, 0.79463, 0.82429, 0.86485, 0.88610, 0.91153, 0.92736, 0.94683, 1.00639, 1.05998, 1.11823, 1.18356], // n = 25
    [0.58516, 0.62219, 0.66352, 0.68889, 0.71802, 0.75253, 0.79706, 0.82677, 0.86841, 0.88902, 0.91611, 0.93376, 0.95267, 1.01169, 1.06612, 1.11863, 1.18512], // n = 30
    [0.58878, 0.62604, 0.66892, 0.69336, 0.72212, 0.75679, 0.80325, 0.83384, 0.87532, 0.89754, 0.92430, 0.94116, 0.96026, 1.01796, 1.07222, 1.12553, 1.19402], // n = 35
    [0.59063, 0.62834, 0.67107, 0.69563, 0.72421, 0.75959, 0.80604, 0.83668, 0.87640, 0.89711, 0.92458, 0.94094, 0.96146, 1.01796, 1.06716, 1.11886, 1.18863], // n = 40
    [0.59339, 0.63072, 0.67373, 0.69842, 0.72722, 0.76198, 0.80716, 0.83693, 0.87840, 0.90063, 0.92722, 0.94410, 0.96426, 1.02292, 1.07747, 1.12355, 1.19156], // n = 45
    [0.59383, 0.63132, 0.67457, 0.69964, 0.72891, 0.76312, 0.80997, 0.84077, 0.88241, 0.90576, 0.93250, 0.94937, 0.96752, 1.02628, 1.08652, 1.13648, 1.19320], // n = 50
    [0.59567, 0.63318, 0.67647, 0.70145, 0.73025, 0.76513, 0.81008, 0.84066, 0.88246, 0.90433, 0.93152, 0.94861, 0.96914, 1.02586, 1.08345, 1.13491, 1.21314], // n = 60
    [0.59794, 0.63549, 0.67845, 0.70354, 0.73259, 0.76762, 0.81333, 0.84420, 0.88684, 0.90931, 0.93681, 0.95417, 0.97482, 1.03697, 1.09841, 1.14875, 1.20600], // n = 70
    [0.59940, 0.63706, 0.68028, 0.70504, 0.73393, 0.76951, 0.81572, 0.84618, 0.88728, 0.90919, 0.93541, 0.95167, 0.96903, 1.02761, 1.08661, 1.13791, 1.20138], // n = 80
    [0.60046, 0.63840, 0.68144, 0.70632, 0.73458, 0.76960, 0.81665, 0.84772, 0.88895, 0.91071, 0.93860, 0.95499, 0.97485, 1.03468, 1.09026, 1.13797, 1.21250], // n = 90
    [0.60089, 0.63780, 0.68131, 0.70604, 0.73579, 0.77143, 0.81769, 0.84896, 0.89156, 0.91436, 0.94296, 0.96005, 0.98137, 1.04173, 1.10387, 1.16151, 1.22657], // n = 100
    [0.60236, 0.63942, 0.68270, 0.70790, 0.73712, 0.77354, 0.82008, 0.85090, 0.89348, 0.91615, 0.94374, 0.96010, 0.98009, 1.04336, 1.09859, 1.15117, 1.21817], // n = 120
    [0.60489, 0.64225, 0.68590, 0.71110, 0.74033, 0.77502, 0.82108, 0.85223, 0.89368, 0.91629, 0.94168, 0.95782, 0.97814, 1.04035, 1.09486, 1.14975, 1.21719], // n = 150
    [0.60524, 0.64282, 0.68629, 0.71100, 0.74023, 0.77561, 0.82189, 0.85218, 0.89463, 0.91734, 0.94492, 0.96111, 0.98217, 1.04190, 1.09687, 1.14790, 1.20883], // n = 200
    [0.60670, 0.64411, 0.68703, 0.71258, 0.74191, 0.77749, 0.82484, 0.85676, 0.89898, 0.92138, 0.94918, 0.96610, 0.98682, 1.04812, 1.10223, 1.15351, 1.21925], // n = 250
    [0.60806, 0.64581, 0.68955, 0.71508, 0.74432, 0.77924, 0.82492, 0.85628, 0.89734, 0.91980, 0.94803, 0.96523, 0.98531, 1.04785, 1.11001, 1.16096, 1.23744], // n = 300
    [0.61011, 0.64824, 0.69097, 0.71605, 0.74545, 0.78174, 0.82877, 0.85918, 0.89977, 0.92344, 0.95140, 0.96829, 0.98735, 1.04741, 1.10202, 1.15548, 1.21661], // n = 400
    [0.61034, 0.64800, 0.69087, 0.71606, 0.74538, 0.78162, 0.82778, 0.85957, 0.90197, 0.92467, 0.95191, 0.96975, 0.99091, 1.04936, 1.10370, 1.15689, 1.22561], // n = 500
    [0.61193, 0.64973, 0.69354, 0.71882, 0.74785, 0.78311, 0.83038, 0.86034, 0.90138, 0.92283, 0.95155, 0.96695, 0.98789, 1.05211, 1.11275, 1.16315, 1.22650], // n = 700
    [0.61177, 0.65002, 0.69405, 0.71937, 0.74856, 0.78344, 0.83063, 0.86152, 0.90244, 0.92448, 0.95203, 0.97009, 0.98968, 1.05351, 1.11255, 1.17057, 1.23737], // n = 1000
    [0.61407, 0.65197, 0.69505, 0.71999, 0.74912, 0.78431, 0.83081, 0.86198, 0.90396, 0.92436, 0.95114, 0.96938, 0.99054, 1.05250, 1.11526, 1.16639, 1.24454], // n = 1500
    [0.61389, 0.65200, 0.69555, 0.72171, 0.75109, 0.78675, 0.83217, 0.86343, 0.90469, 0.92770, 0.95555, 0.97351, 0.99548, 1.05278, 1.10980, 1.16383, 1.22700], // n = 2000
    [0.61630, 0.65404, 0.69718, 0.72196, 0.75099, 0.78728, 0.83441, 0.86557, 0.90591, 0.92827, 0.95438, 0.97215, 0.99381, 1.05704, 1.11332, 1.16803, 1.24973], // n = 3000
    [0.61589, 0.65404, 0.69728, 0.72221, 0.75116, 0.78680, 0.83366, 0.86439, 0.90630, 0.92775, 0.95453, 0.97156, 0.99344, 1.05200, 1.11038, 1.17100, 1.23965], // n = 5000
];
